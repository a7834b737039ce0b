#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "moralframe/embed_store.hpp"
#include "moralframe/lexicon.hpp"

namespace moralframe {

struct SeedPair {
  std::string source;
  std::string target;

  bool operator==(const SeedPair&) const = default;
};

// `source<TAB>target` per line; blank and `#` lines skipped.
std::vector<SeedPair> read_seed_pairs(std::istream& in, const std::string& source_label);
std::vector<SeedPair> load_seed_pairs(const std::filesystem::path& path);

// Linear map from source-space to target-space vectors.
struct TranslationMatrix {
  Eigen::MatrixXd matrix;  // d_tgt x d_src
  double ridge_lambda = 0.0;
  std::size_t n_pairs_used = 0;
  // sqrt(mean squared entrywise residual) over used pairs.
  double fit_rmse = 0.0;
  std::vector<SeedPair> dropped;  // either side out of vocabulary

  Vector apply(VectorView source) const;
};

// Minimises sum_i |W x_i - y_i|^2 + lambda |W|_F^2 through the normal
// equations (X^T X + lambda I) W^T = X^T Y. DataError when no pair is usable
// or when lambda = 0 and X^T X is rank deficient.
TranslationMatrix fit_translation(const std::vector<SeedPair>& pairs, const EmbeddingStore& src,
                                  const EmbeddingStore& tgt, double ridge_lambda = 0.0);

// Top-k target-store neighbours of W x. DataError for an unknown source token.
std::vector<Neighbor> translate_word(const TranslationMatrix& tm, std::string_view source_token,
                                     const EmbeddingStore& src, const EmbeddingStore& tgt,
                                     std::size_t k = 1);

struct TranslationAuditRow {
  Foundation foundation;
  Pole pole;
  std::string source_token;
  bool source_oov = false;
  std::vector<Neighbor> targets;
};

struct TranslatedLexicon {
  MoralLexicon lexicon;
  std::vector<TranslationAuditRow> audit;  // cells in canonical order, words sorted
};

// Each source word contributes its top-k neighbours to the same cell.
// DataError naming the first cell that ends up empty.
TranslatedLexicon translate_lexicon(const TranslationMatrix& tm, const MoralLexicon& lexicon,
                                    const EmbeddingStore& src, const EmbeddingStore& tgt,
                                    std::size_t k = 1, std::string target_language = "und");

}  // namespace moralframe
