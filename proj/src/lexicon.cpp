#include "moralframe/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "moralframe/error.hpp"
#include "moralframe/preprocess.hpp"

namespace moralframe {

namespace {

constexpr std::array<std::string_view, kFoundationCount> kFoundationNames{
    "care", "fairness", "loyalty", "authority", "sanctity"};
constexpr std::array<std::string_view, kPoleCount> kPoleNames{"virtue", "vice"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

std::string_view name(Foundation f) { return kFoundationNames[index(f)]; }
std::string_view name(Pole p) { return kPoleNames[index(p)]; }

std::optional<Foundation> parse_foundation(std::string_view s) {
  for (Foundation f : kFoundations) {
    if (name(f) == s) return f;
  }
  return std::nullopt;
}

std::optional<Pole> parse_pole(std::string_view s) {
  for (Pole p : kPoles) {
    if (name(p) == s) return p;
  }
  return std::nullopt;
}

std::string cell_name(Foundation f, Pole p) {
  return std::string(name(f)) + "/" + std::string(name(p));
}

bool MoralLexicon::add(Foundation f, Pole p, std::string_view word) {
  std::string token = to_lower_utf8(trim(word));
  if (token.empty()) throw DomainError("empty lexicon word in " + cell_name(f, p));
  if (token.find_first_of(" \t\r\n") != std::string::npos) {
    throw DomainError("lexicon word '" + token + "' contains whitespace");
  }
  return cells_[index(f)][index(p)].insert(std::move(token)).second;
}

std::size_t MoralLexicon::total_entries() const {
  std::size_t n = 0;
  for (const auto& row : cells_) {
    for (const auto& cell : row) n += cell.size();
  }
  return n;
}

TokenSet MoralLexicon::vocabulary() const {
  TokenSet all;
  for (const auto& row : cells_) {
    for (const auto& cell : row) all.insert(cell.begin(), cell.end());
  }
  return all;
}

MoralLexicon read_lexicon(std::istream& in, const std::string& source_label) {
  MoralLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = line;
    if (trim(view).empty()) continue;
    if (!header_seen && view.starts_with('#')) {
      auto body = trim(view.substr(1));
      if (body.starts_with("language=")) {
        lexicon.set_language_tag(std::string(trim(body.substr(9))));
      }
      continue;
    }

    auto fields = split_tabs(view);
    if (!header_seen) {
      if (fields.size() != 3 || trim(fields[0]) != "foundation" || trim(fields[1]) != "pole" ||
          trim(fields[2]) != "word") {
        throw ParseError(source_label, line_no, "expected header 'foundation<TAB>pole<TAB>word'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      throw ParseError(source_label, line_no,
                       "expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    }
    auto foundation = parse_foundation(to_lower_utf8(trim(fields[0])));
    if (!foundation) {
      throw ParseError(source_label, line_no, "unknown foundation '" + std::string(trim(fields[0])) + "'");
    }
    auto pole = parse_pole(to_lower_utf8(trim(fields[1])));
    if (!pole) {
      throw ParseError(source_label, line_no, "unknown pole '" + std::string(trim(fields[1])) + "'");
    }
    try {
      lexicon.add(*foundation, *pole, fields[2]);
    } catch (const DomainError& e) {
      throw ParseError(source_label, line_no, e.what());
    }
  }
  if (!header_seen || lexicon.total_entries() == 0) {
    throw DataError(source_label + ": lexicon file has no entries");
  }
  return lexicon;
}

MoralLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open lexicon file " + path.string());
  return read_lexicon(in, path.string());
}

void write_lexicon(std::ostream& out, const MoralLexicon& lexicon) {
  out << "# language=" << lexicon.language_tag() << '\n';
  out << "foundation\tpole\tword\n";
  for (Foundation f : kFoundations) {
    for (Pole p : kPoles) {
      for (const auto& word : lexicon.cell(f, p)) {
        out << name(f) << '\t' << name(p) << '\t' << word << '\n';
      }
    }
  }
}

std::size_t ResolvedLexicon::oov_count() const {
  std::size_t n = 0;
  for (const auto& row : oov) {
    for (const auto& cell : row) n += cell.size();
  }
  return n;
}

ResolvedLexicon partition(const MoralLexicon& lexicon, const EmbeddingStore& store) {
  ResolvedLexicon out;
  for (Foundation f : kFoundations) {
    for (Pole p : kPoles) {
      auto& resolved = out.resolved[index(f)][index(p)];
      auto& oov = out.oov[index(f)][index(p)];
      // TokenSet iteration is already sorted by token.
      for (const auto& word : lexicon.cell(f, p)) {
        if (auto v = store.lookup(word)) {
          resolved.push_back({word, *v});
        } else {
          oov.insert(word);
        }
      }
    }
  }
  return out;
}

ResolvedLexicon resolve(const MoralLexicon& lexicon, const EmbeddingStore& store) {
  ResolvedLexicon out = partition(lexicon, store);
  for (Foundation f : kFoundations) {
    for (Pole p : kPoles) {
      if (out.resolved[index(f)][index(p)].empty()) {
        throw DataError("unresolvable lexicon cell " + cell_name(f, p) + ": none of its " +
                        std::to_string(lexicon.cell(f, p).size()) + " words are embedded");
      }
    }
  }
  return out;
}

}  // namespace moralframe
