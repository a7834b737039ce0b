#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "moralframe/embed_store.hpp"

namespace moralframe {

// Canonical order; used for every column layout in the project.
enum class Foundation : std::size_t { care, fairness, loyalty, authority, sanctity };
enum class Pole : std::size_t { virtue, vice };

inline constexpr std::size_t kFoundationCount = 5;
inline constexpr std::size_t kPoleCount = 2;
inline constexpr std::array<Foundation, kFoundationCount> kFoundations{
    Foundation::care, Foundation::fairness, Foundation::loyalty, Foundation::authority,
    Foundation::sanctity};
inline constexpr std::array<Pole, kPoleCount> kPoles{Pole::virtue, Pole::vice};

std::string_view name(Foundation f);
std::string_view name(Pole p);
std::optional<Foundation> parse_foundation(std::string_view s);
std::optional<Pole> parse_pole(std::string_view s);

inline constexpr std::size_t index(Foundation f) { return static_cast<std::size_t>(f); }
inline constexpr std::size_t index(Pole p) { return static_cast<std::size_t>(p); }
inline constexpr Pole opposite(Pole p) { return p == Pole::virtue ? Pole::vice : Pole::virtue; }

// "care/virtue"
std::string cell_name(Foundation f, Pole p);

template <typename T>
using PerFoundation = std::array<T, kFoundationCount>;

template <typename T>
using PerCell = std::array<std::array<T, kPoleCount>, kFoundationCount>;

// Words per (foundation, pole) cell. A word may sit in several cells.
class MoralLexicon {
 public:
  explicit MoralLexicon(std::string language_tag = "und") : language_tag_(std::move(language_tag)) {}

  // Lowercases and trims; returns false if already present in that cell.
  bool add(Foundation f, Pole p, std::string_view word);

  const TokenSet& cell(Foundation f, Pole p) const { return cells_[index(f)][index(p)]; }
  const std::string& language_tag() const noexcept { return language_tag_; }
  void set_language_tag(std::string tag) { language_tag_ = std::move(tag); }

  std::size_t total_entries() const;
  // Union of all cells.
  TokenSet vocabulary() const;

  bool operator==(const MoralLexicon&) const = default;

 private:
  PerCell<TokenSet> cells_{};
  std::string language_tag_;
};

// TSV with header `foundation<TAB>pole<TAB>word`. Leading `#` lines are
// comments; `# language=<tag>` sets the language tag.
MoralLexicon read_lexicon(std::istream& in, const std::string& source_label);
MoralLexicon load_lexicon(const std::filesystem::path& path);
// Canonical serialization: header, then cells in canonical order, words sorted.
void write_lexicon(std::ostream& out, const MoralLexicon& lexicon);

struct ResolvedWord {
  std::string token;
  VectorView vector;
};

// Views point into the store passed to resolve(); it must outlive this.
struct ResolvedLexicon {
  PerCell<std::vector<ResolvedWord>> resolved;
  PerCell<TokenSet> oov;

  std::size_t oov_count() const;
};

// Splits each cell into embedded and out-of-vocabulary words, sorted by
// token. Never throws; cells may end up empty.
ResolvedLexicon partition(const MoralLexicon& lexicon, const EmbeddingStore& store);

// partition(), then throws DataError naming the first cell with no embedded words.
ResolvedLexicon resolve(const MoralLexicon& lexicon, const EmbeddingStore& store);

}  // namespace moralframe
