#include "moralframe/pca.hpp"

#include <algorithm>
#include <string>

#include "moralframe/error.hpp"

namespace moralframe {

PcaResult pca_project(const Eigen::MatrixXd& rows, std::size_t n_components) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index dim = rows.cols();
  if (n < 2) throw DomainError("pca_project: need at least 2 vectors");
  if (n_components == 0) throw DomainError("pca_project: n_components must be positive");
  if (static_cast<Eigen::Index>(n_components) > dim ||
      static_cast<Eigen::Index>(n_components) > n - 1) {
    throw DomainError("pca_project: n_components " + std::to_string(n_components) +
                      " exceeds min(dim, count - 1) = " + std::to_string(std::min(dim, n - 1)));
  }
  if (!rows.allFinite()) throw DomainError("pca_project: non-finite input");

  PcaResult out;
  out.mean = rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = rows.rowwise() - out.mean.transpose();
  const Eigen::MatrixXd covariance =
      (centered.transpose() * centered) / static_cast<double>(n - 1);
  const double total = covariance.trace();
  if (!(total > 0.0)) throw DomainError("pca_project: all vectors identical (zero covariance)");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) throw DomainError("pca_project: eigensolver failed");

  // Eigen returns ascending eigenvalues.
  const Eigen::Index k = static_cast<Eigen::Index>(n_components);
  out.components.resize(dim, k);
  out.explained_variance_ratio.resize(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index src = dim - 1 - c;
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < dim; ++j) {
      if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
    }
    if (v[arg] < 0) v = -v;
    out.components.col(c) = v;
    out.explained_variance_ratio[c] = std::max(0.0, solver.eigenvalues()[src]) / total;
  }
  out.projections = centered * out.components;
  return out;
}

PcaResult pca_project(const std::vector<Vector>& vectors, std::size_t n_components) {
  if (vectors.empty()) throw DomainError("pca_project: need at least 2 vectors");
  const std::size_t dim = vectors.front().size();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) throw DomainError("pca_project: mixed vector lengths");
    for (std::size_t j = 0; j < dim; ++j) {
      rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vectors[i][j];
    }
  }
  return pca_project(rows, n_components);
}

}  // namespace moralframe
