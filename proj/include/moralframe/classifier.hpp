#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "moralframe/frame_scoring.hpp"

namespace moralframe {

// bias_care ... bias_sanctity, intensity_care ... intensity_sanctity
const std::vector<std::string>& frame_feature_names();

struct FeatureMatrix {
  Eigen::MatrixXd rows;  // n x p
  std::vector<std::string> labels;
  std::vector<std::string> ids;
  std::vector<std::string> feature_names;
};

// Ten frame features per scored document, biases first.
FeatureMatrix frame_features(std::span<const FrameScores> scores);

struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;  // population; 1 for constant features
  std::vector<std::size_t> constant_features;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& rows) const;
};

struct Standardized {
  Eigen::MatrixXd rows;
  Standardization params;
};

// Per-column z-score with population stddev. Constant columns map to 0 and
// are listed in params.constant_features. DomainError for fewer than 2 rows.
Standardized standardize(const Eigen::MatrixXd& rows);

struct Hyperparams {
  double l2_lambda = 1e-2;
  double step = 0.1;
  double tolerance = 1e-8;
  std::size_t max_iters = 10000;
  std::uint64_t seed = 42;
  // Weights start uniform in [-init_scale, init_scale] drawn from `seed`;
  // 0 means zero initialisation.
  double init_scale = 0.0;
};

// L(w, b) = (1/n) sum_i [log(1 + e^{z_i}) - y_i z_i] + (lambda/2) |w|^2,
// z_i = x_i . w + b, y_i in {0, 1}. The intercept is not penalised.
// Parameter vectors are [w_1 .. w_p, b].
class LogisticObjective {
 public:
  LogisticObjective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2_lambda);

  double loss(const Eigen::VectorXd& params) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& params) const;
  std::size_t n_params() const { return static_cast<std::size_t>(x_.cols()) + 1; }

 private:
  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& y_;
  double l2_;
};

enum class StopReason { gradient_tolerance, loss_resolution, max_iters };

// Relative loss increase above which a step counts as divergence rather
// than rounding noise.
inline constexpr double kLossResolution = 1e-12;

struct BinaryFit {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::max_iters;
  double final_gradient_norm = 0.0;
  // Loss before the first step and after every step.
  std::vector<double> loss_trace;
};

// Full-batch gradient descent with a fixed step. Stops when |grad| <=
// tolerance, when a step would raise the loss by no more than rounding
// noise (the loss has reached double resolution), or after max_iters steps.
// A larger increase or a non-finite loss is a DataError naming the step.
BinaryFit fit_binary(const Eigen::MatrixXd& x, const Eigen::VectorXd& y01, const Hyperparams& hp);

struct LogisticModel {
  std::vector<std::string> classes;  // sorted
  std::vector<std::string> feature_names;
  // Binary: one row scoring classes[1]. Otherwise one row per class.
  Eigen::MatrixXd weights;
  Eigen::VectorXd intercepts;
  Standardization standardization;
  Hyperparams hyperparams;
  std::vector<std::size_t> iterations;
  std::vector<bool> converged;

  bool is_binary() const { return classes.size() == 2; }
};

// Standardises internally; binary for two classes, one-vs-rest otherwise.
// DataError for fewer than two classes.
LogisticModel train_logreg(const FeatureMatrix& features, const Hyperparams& hp = {});
LogisticModel train_logreg(const Eigen::MatrixXd& rows, const std::vector<std::string>& labels,
                           const Hyperparams& hp = {},
                           std::vector<std::string> feature_names = {});

struct Prediction {
  std::vector<std::string> labels;
  // n x n_classes in model class order. Binary rows sum to 1; one-vs-rest
  // rows are the per-class sigmoids normalised to sum to 1.
  Eigen::MatrixXd probabilities;
  // n x n_models raw linear scores.
  Eigen::MatrixXd scores;
};

Prediction predict(const LogisticModel& model, const Eigen::MatrixXd& rows);

enum class Averaging { binary, macro, weighted };

struct EvalMetrics {
  double precision = 0, recall = 0, f1 = 0, accuracy = 0;
  Averaging averaging = Averaging::weighted;
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> confusion;  // [gold][predicted]
  std::vector<double> class_precision, class_recall, class_f1;
  std::vector<std::size_t> support;
};

// `classes` defaults to the sorted distinct gold labels; a predicted label
// outside it is a DataError. Binary averaging needs exactly two classes and
// reports the `positive` class (default: the second class).
EvalMetrics evaluate(const std::vector<std::string>& predicted, const std::vector<std::string>& gold,
                     Averaging averaging,
                     std::optional<std::vector<std::string>> classes = std::nullopt,
                     std::optional<std::string> positive = std::nullopt);

std::optional<Averaging> parse_averaging(std::string_view s);
std::string_view name(Averaging a);

struct CoefficientTable {
  std::vector<std::string> features;  // rows
  std::vector<std::string> columns;   // classes
  Eigen::MatrixXd values;             // features x columns, standardized space
};

// Binary models give one column for classes[1]; its negation is implied for
// classes[0].
CoefficientTable coefficient_report(const LogisticModel& model);

// Fold index in [0, k) per row: a seeded Fisher-Yates shuffle of row indices
// dealt round-robin, so fold sizes differ by at most one. Bit-identical on
// every platform for a given seed.
std::vector<std::size_t> kfold_assign(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace moralframe
