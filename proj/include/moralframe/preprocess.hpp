#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "moralframe/embed_store.hpp"

namespace moralframe {

struct NormalizeOptions {
  // Remove `@name` mentions entirely instead of keeping `name`.
  bool drop_mentions = false;
};

struct PipelineOptions {
  NormalizeOptions normalize;
  // Drop leading "rt" tokens (retweet marker).
  bool drop_retweet_prefix = false;
};

// Unicode-aware lowercase of UTF-8 text (NFC first).
std::string to_lower_utf8(std::string_view text);

// NFC -> lowercase -> URL removal -> @/# sigil handling -> punctuation
// removal -> whitespace collapse -> trim. Punctuation is deleted, not replaced
// by a space, so "covid-19" becomes "covid19". URLs are replaced by a space.
std::string normalize_text(std::string_view raw, const NormalizeOptions& options = {});

// Splits on Unicode whitespace.
std::vector<std::string> tokenize(std::string_view normalized);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const TokenSet& stopwords);

// One token per line; blank lines and `#` comments skipped; lowercased.
TokenSet read_stopwords(std::istream& in);
TokenSet load_stopwords(const std::filesystem::path& path);

// normalize -> tokenize -> [drop rt prefix] -> remove stopwords.
std::vector<std::string> preprocess(std::string_view raw, const TokenSet& stopwords,
                                    const PipelineOptions& options = {});

struct Document {
  std::string id;
  std::string label;
  std::vector<std::string> tokens;
};

struct CorpusStats {
  std::size_t n_docs = 0;
  std::size_t n_tokens = 0;
  std::size_t n_empty_after_preprocess = 0;
};

struct Corpus {
  std::vector<Document> documents;
  std::string language_tag = "und";
  CorpusStats stats;
};

// JSON lines with string fields `id`, `label`, `text`. Blank lines skipped.
Corpus read_corpus(std::istream& in, const std::string& source_label, const TokenSet& stopwords,
                   const PipelineOptions& options = {});
Corpus load_corpus(const std::filesystem::path& path, const TokenSet& stopwords,
                   const PipelineOptions& options = {});

}  // namespace moralframe
