#include "moralframe/xlingual.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include "moralframe/error.hpp"

namespace moralframe {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

Eigen::Map<const Eigen::VectorXd> as_eigen(VectorView v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

}  // namespace

std::vector<SeedPair> read_seed_pairs(std::istream& in, const std::string& source_label) {
  std::vector<SeedPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    std::string_view view = trim(line);
    if (view.empty() || view.starts_with('#')) continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos || view.find('\t', tab + 1) != std::string_view::npos) {
      throw ParseError(source_label, line_no, "expected 'source<TAB>target'");
    }
    SeedPair pair{std::string(trim(view.substr(0, tab))), std::string(trim(view.substr(tab + 1)))};
    if (pair.source.empty() || pair.target.empty()) {
      throw ParseError(source_label, line_no, "empty token in seed pair");
    }
    pairs.push_back(std::move(pair));
  }
  if (pairs.empty()) throw DataError(source_label + ": no seed pairs");
  return pairs;
}

std::vector<SeedPair> load_seed_pairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open seed pair file " + path.string());
  return read_seed_pairs(in, path.string());
}

Vector TranslationMatrix::apply(VectorView source) const {
  if (static_cast<Eigen::Index>(source.size()) != matrix.cols()) {
    throw DomainError("translation: source vector length " + std::to_string(source.size()) +
                      " does not match matrix width " + std::to_string(matrix.cols()));
  }
  Eigen::VectorXd y = matrix * as_eigen(source);
  return Vector(y.data(), y.data() + y.size());
}

TranslationMatrix fit_translation(const std::vector<SeedPair>& pairs, const EmbeddingStore& src,
                                  const EmbeddingStore& tgt, double ridge_lambda) {
  if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
    throw DomainError("fit_translation: ridge lambda must be finite and >= 0");
  }
  TranslationMatrix tm;
  tm.ridge_lambda = ridge_lambda;

  std::vector<std::pair<VectorView, VectorView>> used;
  for (const auto& pair : pairs) {
    auto x = src.lookup(pair.source);
    auto y = tgt.lookup(pair.target);
    if (!x || !y) {
      tm.dropped.push_back(pair);
      continue;
    }
    used.emplace_back(*x, *y);
  }
  if (used.empty()) throw DataError("fit_translation: no seed pair has both tokens embedded");

  const auto n = static_cast<Eigen::Index>(used.size());
  const auto d_src = static_cast<Eigen::Index>(src.dim());
  const auto d_tgt = static_cast<Eigen::Index>(tgt.dim());
  Eigen::MatrixXd x(n, d_src), y(n, d_tgt);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = as_eigen(used[static_cast<std::size_t>(i)].first).transpose();
    y.row(i) = as_eigen(used[static_cast<std::size_t>(i)].second).transpose();
  }

  Eigen::MatrixXd gram = x.transpose() * x;
  gram.diagonal().array() += ridge_lambda;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double max_eig = eig.eigenvalues().maxCoeff();
  const double min_eig = eig.eigenvalues().minCoeff();
  const double rank_tol = max_eig * static_cast<double>(d_src) * 1e-13;
  if (!(max_eig > 0.0) || min_eig <= rank_tol) {
    throw DataError("fit_translation: rank-deficient system (" + std::to_string(n) +
                    " usable pairs, dimension " + std::to_string(d_src) +
                    "); use a ridge lambda > 0");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw DataError("fit_translation: normal equations not positive definite; use a ridge lambda > 0");
  }
  const Eigen::MatrixXd w_t = llt.solve(x.transpose() * y);  // d_src x d_tgt
  tm.matrix = w_t.transpose();
  if (!tm.matrix.allFinite()) throw DataError("fit_translation: non-finite solution");

  const Eigen::MatrixXd residual = x * w_t - y;
  tm.n_pairs_used = used.size();
  tm.fit_rmse = std::sqrt(residual.squaredNorm() / static_cast<double>(n * d_tgt));
  return tm;
}

std::vector<Neighbor> translate_word(const TranslationMatrix& tm, std::string_view source_token,
                                     const EmbeddingStore& src, const EmbeddingStore& tgt,
                                     std::size_t k) {
  auto x = src.lookup(source_token);
  if (!x) throw DataError("translate_word: '" + std::string(source_token) + "' is not in the source embeddings");
  if (tm.matrix.rows() != static_cast<Eigen::Index>(tgt.dim())) {
    throw DomainError("translate_word: matrix height does not match target dimension");
  }
  return nearest_neighbors(tgt, tm.apply(*x), k);
}

TranslatedLexicon translate_lexicon(const TranslationMatrix& tm, const MoralLexicon& lexicon,
                                    const EmbeddingStore& src, const EmbeddingStore& tgt,
                                    std::size_t k, std::string target_language) {
  TranslatedLexicon out{MoralLexicon(std::move(target_language)), {}};
  for (Foundation f : kFoundations) {
    for (Pole p : kPoles) {
      for (const auto& word : lexicon.cell(f, p)) {
        TranslationAuditRow row{f, p, word, false, {}};
        if (!src.contains(word)) {
          row.source_oov = true;
        } else {
          row.targets = translate_word(tm, word, src, tgt, k);
          for (const auto& n : row.targets) out.lexicon.add(f, p, n.token);
        }
        out.audit.push_back(std::move(row));
      }
      if (out.lexicon.cell(f, p).empty()) {
        throw DataError("unresolvable lexicon cell " + cell_name(f, p) + " after translation");
      }
    }
  }
  return out;
}

}  // namespace moralframe
