#include "moralframe/preprocess.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/regex.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <fstream>
#include <istream>
#include <memory>
#include <unordered_set>

#include "json.hpp"
#include "moralframe/error.hpp"

namespace moralframe {

namespace {

icu::UnicodeString nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFC unavailable: ") + u_errorName(status));
  icu::UnicodeString out = normalizer->normalize(s, status);
  if (U_FAILURE(status)) throw Error(std::string("ICU normalization failed: ") + u_errorName(status));
  return out;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

// Compiled patterns are immutable; a matcher is created per call.
struct Patterns {
  std::unique_ptr<icu::RegexPattern> url;
  std::unique_ptr<icu::RegexPattern> mention;
  std::unique_ptr<icu::RegexPattern> sigil;

  static const Patterns& get() {
    static const Patterns patterns;
    return patterns;
  }

 private:
  Patterns() {
    url = compile(u"(?:[a-z][a-z0-9+.\\-]*://|www\\.)\\S*|\\bt\\.co/\\S*");
    mention = compile(u"@[\\p{L}\\p{N}\\p{M}_]+");
    sigil = compile(u"[@#](?=[\\p{L}\\p{N}_])");
  }

  static std::unique_ptr<icu::RegexPattern> compile(const char16_t* pattern) {
    UErrorCode status = U_ZERO_ERROR;
    UParseError parse_error;
    std::unique_ptr<icu::RegexPattern> p(
        icu::RegexPattern::compile(icu::UnicodeString(pattern), parse_error, status));
    if (U_FAILURE(status)) throw Error(std::string("ICU regex compile failed: ") + u_errorName(status));
    return p;
  }
};

icu::UnicodeString replace_all(const icu::RegexPattern& pattern, const icu::UnicodeString& input,
                               const icu::UnicodeString& replacement) {
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::RegexMatcher> matcher(pattern.matcher(input, status));
  if (U_FAILURE(status)) throw Error(std::string("ICU matcher failed: ") + u_errorName(status));
  icu::UnicodeString out = matcher->replaceAll(replacement, status);
  if (U_FAILURE(status)) throw Error(std::string("ICU replace failed: ") + u_errorName(status));
  return out;
}

}  // namespace

std::string to_lower_utf8(std::string_view text) {
  icu::UnicodeString s = nfc(icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))));
  s.toLower(icu::Locale::getRoot());
  return to_utf8(nfc(s));
}

std::string normalize_text(std::string_view raw, const NormalizeOptions& options) {
  const Patterns& patterns = Patterns::get();
  icu::UnicodeString s = nfc(icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size()))));
  s.toLower(icu::Locale::getRoot());
  s = replace_all(*patterns.url, s, u" ");
  if (options.drop_mentions) s = replace_all(*patterns.mention, s, u" ");
  s = replace_all(*patterns.sigil, s, u"");

  icu::UnicodeString cleaned;
  bool pending_space = false;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    if (u_ispunct(c)) continue;
    if (u_isUWhiteSpace(c) || c == 0x200B) {
      pending_space = true;
      continue;
    }
    if (pending_space && !cleaned.isEmpty()) cleaned.append(static_cast<UChar>(u' '));
    pending_space = false;
    cleaned.append(c);
  }
  // Deleting punctuation can leave a base letter next to a combining mark.
  return to_utf8(nfc(cleaned));
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; };
  while (i < normalized.size()) {
    while (i < normalized.size() && space(normalized[i])) ++i;
    const std::size_t start = i;
    while (i < normalized.size() && !space(normalized[i])) ++i;
    if (i > start) tokens.emplace_back(normalized.substr(start, i - start));
  }
  return tokens;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const TokenSet& stopwords) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stopwords.contains(t)) out.push_back(t);
  }
  return out;
}

TokenSet read_stopwords(std::istream& in) {
  TokenSet words;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = tokenize(line);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;
    for (const auto& t : tokens) words.insert(to_lower_utf8(t));
  }
  return words;
}

TokenSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open stopword file " + path.string());
  return read_stopwords(in);
}

std::vector<std::string> preprocess(std::string_view raw, const TokenSet& stopwords,
                                    const PipelineOptions& options) {
  auto tokens = tokenize(normalize_text(raw, options.normalize));
  if (options.drop_retweet_prefix) {
    std::size_t skip = 0;
    while (skip < tokens.size() && tokens[skip] == "rt") ++skip;
    tokens.erase(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(skip));
  }
  return remove_stopwords(tokens, stopwords);
}

Corpus read_corpus(std::istream& in, const std::string& source_label, const TokenSet& stopwords,
                   const PipelineOptions& options) {
  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source_label, line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(source_label, line_no, "record is not a JSON object");
    for (const char* field : {"id", "label", "text"}) {
      auto it = record.find(field);
      if (it == record.end() || !it->is_string()) {
        throw ParseError(source_label, line_no, std::string("missing string field '") + field + "'");
      }
    }

    Document doc;
    doc.id = record["id"].get<std::string>();
    doc.label = record["label"].get<std::string>();
    if (!seen_ids.insert(doc.id).second) {
      throw ParseError(source_label, line_no, "duplicate document id '" + doc.id + "'");
    }
    doc.tokens = preprocess(record["text"].get<std::string>(), stopwords, options);
    corpus.stats.n_tokens += doc.tokens.size();
    if (doc.tokens.empty()) ++corpus.stats.n_empty_after_preprocess;
    corpus.documents.push_back(std::move(doc));
  }
  corpus.stats.n_docs = corpus.documents.size();
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, const TokenSet& stopwords,
                   const PipelineOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  return read_corpus(in, path.string(), stopwords, options);
}

}  // namespace moralframe
