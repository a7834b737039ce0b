#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace moralframe {

using Vector = std::vector<double>;
using VectorView = std::span<const double>;
using TokenSet = std::set<std::string, std::less<>>;

// Token -> vector map with a fixed dimensionality. Rows live in one
// contiguous row-major buffer in insertion order. Populate with add(), then
// share as const.
class EmbeddingStore {
 public:
  EmbeddingStore(std::size_t dim, std::string source_label = {});

  // Adds a row. Returns false (and keeps the existing row) if the token is
  // already present. Throws DomainError on bad token, wrong length or
  // non-finite values.
  bool add(std::string_view token, VectorView values);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& source_label() const noexcept { return source_label_; }

  // Exact, case-sensitive.
  std::optional<VectorView> lookup(std::string_view token) const;
  bool contains(std::string_view token) const;

  const std::string& token(std::size_t row) const { return tokens_[row]; }
  VectorView row(std::size_t row) const { return {data_.data() + row * dim_, dim_}; }
  double row_norm(std::size_t row) const { return norms_[row]; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<double>& data() const noexcept { return data_; }

  // Rows rejected by the loader because the token had already been seen.
  std::size_t duplicates_skipped() const noexcept { return duplicates_skipped_; }
  void note_duplicate() noexcept { ++duplicates_skipped_; }

 private:
  std::size_t dim_;
  std::string source_label_;
  std::vector<std::string> tokens_;
  std::vector<double> data_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t duplicates_skipped_ = 0;
};

// Whitespace-separated text: `token v1 ... vd` per line, with an optional
// `count dim` header line. LF or CRLF. When `restrict_to` is given, only
// those tokens are kept (other lines are still checked for field count).
EmbeddingStore read_embeddings(std::istream& in, const std::string& source_label,
                               const TokenSet* restrict_to = nullptr);
EmbeddingStore load_embeddings(const std::filesystem::path& path,
                               const TokenSet* restrict_to = nullptr);

// Cosine similarity clamped to [-1, 1]. DomainError on length mismatch or a
// zero-norm argument.
double cosine(VectorView a, VectorView b);

double norm(VectorView a);

struct Neighbor {
  std::string token;
  double similarity;

  bool operator==(const Neighbor&) const = default;
};

// Top-k rows by cosine to `query`, descending, ties by token. Zero-norm rows
// are never returned.
std::vector<Neighbor> nearest_neighbors(const EmbeddingStore& store, VectorView query,
                                        std::size_t k, const TokenSet* exclude = nullptr);

}  // namespace moralframe
