#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "moralframe/embed_store.hpp"

namespace moralframe {

struct PcaResult {
  Eigen::VectorXd mean;
  // One row per input point, one column per component.
  Eigen::MatrixXd projections;
  // One column per component; orthonormal.
  Eigen::MatrixXd components;
  // eigenvalue / total variance, non-increasing.
  Eigen::VectorXd explained_variance_ratio;
};

// Classical PCA on the sample covariance (1/(n-1)). Each component is
// oriented so its largest-magnitude entry is positive (first such entry on
// ties). Requires n >= 2 rows and n_components <= min(dim, n - 1).
// DomainError when all rows coincide.
PcaResult pca_project(const Eigen::MatrixXd& rows, std::size_t n_components);
PcaResult pca_project(const std::vector<Vector>& vectors, std::size_t n_components);

}  // namespace moralframe
