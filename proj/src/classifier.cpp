#include "moralframe/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "moralframe/error.hpp"

namespace moralframe {

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Uniform integer in [0, bound) by rejection, independent of the standard
// library's distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

const std::vector<std::string>& frame_feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (Foundation f : kFoundations) out.push_back("bias_" + std::string(name(f)));
    for (Foundation f : kFoundations) out.push_back("intensity_" + std::string(name(f)));
    return out;
  }();
  return names;
}

FeatureMatrix frame_features(std::span<const FrameScores> scores) {
  FeatureMatrix fm;
  fm.feature_names = frame_feature_names();
  fm.rows.resize(static_cast<Eigen::Index>(scores.size()), 2 * kFoundationCount);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t f = 0; f < kFoundationCount; ++f) {
      fm.rows(r, static_cast<Eigen::Index>(f)) = scores[i].bias[f];
      fm.rows(r, static_cast<Eigen::Index>(kFoundationCount + f)) = scores[i].intensity[f];
    }
    fm.labels.push_back(scores[i].label);
    fm.ids.push_back(scores[i].doc_id);
  }
  return fm;
}

Eigen::MatrixXd Standardization::apply(const Eigen::MatrixXd& rows) const {
  if (rows.cols() != mean.size()) {
    throw DomainError("feature width " + std::to_string(rows.cols()) + " does not match model width " +
                      std::to_string(mean.size()));
  }
  return (rows.rowwise() - mean.transpose()).array().rowwise() / stddev.transpose().array();
}

Standardized standardize(const Eigen::MatrixXd& rows) {
  if (rows.rows() < 2) throw DomainError("standardize: need at least 2 rows");
  Standardized out;
  out.params.mean = rows.colwise().mean().transpose();
  out.params.stddev.resize(rows.cols());
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    const double var =
        (rows.col(j).array() - out.params.mean[j]).square().sum() / static_cast<double>(rows.rows());
    double sd = std::sqrt(var);
    if (!(sd > 0.0)) {
      sd = 1.0;
      out.params.constant_features.push_back(static_cast<std::size_t>(j));
    }
    out.params.stddev[j] = sd;
  }
  out.rows = out.params.apply(rows);
  // Constant columns are exactly zero after centring; guard against rounding.
  for (std::size_t j : out.params.constant_features) out.rows.col(static_cast<Eigen::Index>(j)).setZero();
  return out;
}

LogisticObjective::LogisticObjective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                     double l2_lambda)
    : x_(x), y_(y), l2_(l2_lambda) {
  if (x.rows() != y.size()) throw DomainError("logistic objective: row/label count mismatch");
  if (x.rows() == 0) throw DomainError("logistic objective: no rows");
}

double LogisticObjective::loss(const Eigen::VectorXd& params) const {
  const Eigen::Index p = x_.cols();
  const auto w = params.head(p);
  const double b = params[p];
  const Eigen::VectorXd z = (x_ * w).array() + b;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) sum += softplus(z[i]) - y_[i] * z[i];
  return sum / static_cast<double>(x_.rows()) + 0.5 * l2_ * w.squaredNorm();
}

Eigen::VectorXd LogisticObjective::gradient(const Eigen::VectorXd& params) const {
  const Eigen::Index p = x_.cols();
  const auto w = params.head(p);
  const double b = params[p];
  Eigen::VectorXd residual = (x_ * w).array() + b;
  for (Eigen::Index i = 0; i < residual.size(); ++i) residual[i] = sigmoid(residual[i]) - y_[i];
  const double n = static_cast<double>(x_.rows());
  Eigen::VectorXd g(p + 1);
  g.head(p) = x_.transpose() * residual / n + l2_ * w;
  g[p] = residual.sum() / n;
  return g;
}

BinaryFit fit_binary(const Eigen::MatrixXd& x, const Eigen::VectorXd& y01, const Hyperparams& hp) {
  if (!(hp.step > 0.0)) throw DomainError("step size must be positive");
  if (!(hp.l2_lambda >= 0.0)) throw DomainError("l2 lambda must be >= 0");
  LogisticObjective objective(x, y01, hp.l2_lambda);
  const Eigen::Index p = x.cols();

  Eigen::VectorXd params = Eigen::VectorXd::Zero(p + 1);
  if (hp.init_scale > 0.0) {
    std::mt19937_64 rng(hp.seed);
    for (Eigen::Index j = 0; j < p; ++j) params[j] = hp.init_scale * (2.0 * unit_uniform(rng) - 1.0);
  }

  BinaryFit fit;
  double loss = objective.loss(params);
  fit.loss_trace.push_back(loss);
  Eigen::VectorXd grad = objective.gradient(params);
  while (true) {
    fit.final_gradient_norm = grad.norm();
    if (fit.final_gradient_norm <= hp.tolerance) {
      fit.converged = true;
      fit.stop_reason = StopReason::gradient_tolerance;
      break;
    }
    if (fit.iterations >= hp.max_iters) {
      fit.stop_reason = StopReason::max_iters;
      break;
    }
    Eigen::VectorXd candidate = params - hp.step * grad;
    const double candidate_loss = objective.loss(candidate);
    const bool finite = std::isfinite(candidate_loss) && candidate.allFinite();
    if (!finite || candidate_loss > loss + kLossResolution * std::max(1.0, std::abs(loss))) {
      throw DataError("logistic regression diverged at iteration " + std::to_string(fit.iterations + 1) +
                      " with step size " + std::to_string(hp.step) + "; reduce the step");
    }
    // An increase within rounding noise: no further progress is representable.
    if (candidate_loss > loss) {
      fit.converged = true;
      fit.stop_reason = StopReason::loss_resolution;
      break;
    }
    params = std::move(candidate);
    loss = candidate_loss;
    ++fit.iterations;
    fit.loss_trace.push_back(loss);
    grad = objective.gradient(params);
  }
  fit.weights = params.head(p);
  fit.intercept = params[p];
  return fit;
}

LogisticModel train_logreg(const Eigen::MatrixXd& rows, const std::vector<std::string>& labels,
                           const Hyperparams& hp, std::vector<std::string> feature_names) {
  if (static_cast<std::size_t>(rows.rows()) != labels.size()) {
    throw DomainError("train_logreg: " + std::to_string(rows.rows()) + " rows but " +
                      std::to_string(labels.size()) + " labels");
  }
  if (!rows.allFinite()) throw DataError("train_logreg: non-finite feature value");
  const std::set<std::string> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) throw DataError("train_logreg: need at least two classes");

  LogisticModel model;
  model.classes.assign(distinct.begin(), distinct.end());
  if (feature_names.empty()) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) feature_names.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(feature_names.size()) != rows.cols()) {
    throw DomainError("train_logreg: feature name count does not match width");
  }
  model.feature_names = std::move(feature_names);
  model.hyperparams = hp;

  Standardized z = standardize(rows);
  model.standardization = z.params;

  const std::size_t n_models = model.is_binary() ? 1 : model.classes.size();
  model.weights.resize(static_cast<Eigen::Index>(n_models), rows.cols());
  model.intercepts.resize(static_cast<Eigen::Index>(n_models));
  for (std::size_t m = 0; m < n_models; ++m) {
    const std::string& positive = model.is_binary() ? model.classes[1] : model.classes[m];
    Eigen::VectorXd y(rows.rows());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      y[i] = labels[static_cast<std::size_t>(i)] == positive ? 1.0 : 0.0;
    }
    BinaryFit fit = fit_binary(z.rows, y, hp);
    model.weights.row(static_cast<Eigen::Index>(m)) = fit.weights.transpose();
    model.intercepts[static_cast<Eigen::Index>(m)] = fit.intercept;
    model.iterations.push_back(fit.iterations);
    model.converged.push_back(fit.converged);
  }
  return model;
}

LogisticModel train_logreg(const FeatureMatrix& features, const Hyperparams& hp) {
  return train_logreg(features.rows, features.labels, hp, features.feature_names);
}

Prediction predict(const LogisticModel& model, const Eigen::MatrixXd& rows) {
  if (rows.cols() != model.weights.cols()) {
    throw DomainError("predict: feature width " + std::to_string(rows.cols()) +
                      " does not match model width " + std::to_string(model.weights.cols()));
  }
  Prediction out;
  const Eigen::MatrixXd z = model.standardization.apply(rows);
  out.scores = (z * model.weights.transpose()).rowwise() + model.intercepts.transpose();
  const Eigen::Index n = rows.rows();
  const auto n_classes = static_cast<Eigen::Index>(model.classes.size());
  out.probabilities.resize(n, n_classes);
  out.labels.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (model.is_binary()) {
      const double p1 = sigmoid(out.scores(i, 0));
      out.probabilities(i, 0) = 1.0 - p1;
      out.probabilities(i, 1) = p1;
      out.labels.push_back(out.scores(i, 0) > 0.0 ? model.classes[1] : model.classes[0]);
      continue;
    }
    Eigen::Index best = 0;
    double total = 0.0;
    for (Eigen::Index c = 0; c < n_classes; ++c) {
      if (out.scores(i, c) > out.scores(i, best)) best = c;
      out.probabilities(i, c) = sigmoid(out.scores(i, c));
      total += out.probabilities(i, c);
    }
    if (total > 0.0) out.probabilities.row(i) /= total;
    out.labels.push_back(model.classes[static_cast<std::size_t>(best)]);
  }
  return out;
}

std::optional<Averaging> parse_averaging(std::string_view s) {
  if (s == "binary") return Averaging::binary;
  if (s == "macro") return Averaging::macro;
  if (s == "weighted") return Averaging::weighted;
  return std::nullopt;
}

std::string_view name(Averaging a) {
  switch (a) {
    case Averaging::binary:
      return "binary";
    case Averaging::macro:
      return "macro";
    case Averaging::weighted:
      return "weighted";
  }
  return "unknown";
}

EvalMetrics evaluate(const std::vector<std::string>& predicted, const std::vector<std::string>& gold,
                     Averaging averaging, std::optional<std::vector<std::string>> classes,
                     std::optional<std::string> positive) {
  if (predicted.size() != gold.size()) {
    throw DomainError("evaluate: " + std::to_string(predicted.size()) + " predictions for " +
                      std::to_string(gold.size()) + " gold labels");
  }
  if (gold.empty()) throw DomainError("evaluate: empty evaluation set");

  EvalMetrics m;
  m.averaging = averaging;
  if (classes) {
    m.classes = *classes;
  } else {
    const std::set<std::string> distinct(gold.begin(), gold.end());
    m.classes.assign(distinct.begin(), distinct.end());
  }
  std::map<std::string, std::size_t> slot;
  for (std::size_t c = 0; c < m.classes.size(); ++c) slot.emplace(m.classes[c], c);
  const std::size_t k = m.classes.size();
  m.confusion.assign(k, std::vector<std::size_t>(k, 0));

  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto g = slot.find(gold[i]);
    if (g == slot.end()) throw DataError("evaluate: unknown gold label '" + gold[i] + "'");
    auto p = slot.find(predicted[i]);
    if (p == slot.end()) throw DataError("evaluate: unknown predicted label '" + predicted[i] + "'");
    ++m.confusion[g->second][p->second];
    if (g->second == p->second) ++correct;
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());

  m.class_precision.assign(k, 0.0);
  m.class_recall.assign(k, 0.0);
  m.class_f1.assign(k, 0.0);
  m.support.assign(k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t tp = m.confusion[c][c], pred_c = 0, gold_c = 0;
    for (std::size_t o = 0; o < k; ++o) {
      pred_c += m.confusion[o][c];
      gold_c += m.confusion[c][o];
    }
    m.support[c] = gold_c;
    const double prec = pred_c ? static_cast<double>(tp) / static_cast<double>(pred_c) : 0.0;
    const double rec = gold_c ? static_cast<double>(tp) / static_cast<double>(gold_c) : 0.0;
    m.class_precision[c] = prec;
    m.class_recall[c] = rec;
    m.class_f1[c] = prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
  }

  switch (averaging) {
    case Averaging::binary: {
      if (k != 2) throw DomainError("evaluate: binary averaging needs exactly 2 classes");
      const std::string pos = positive.value_or(m.classes[1]);
      auto it = slot.find(pos);
      if (it == slot.end()) throw DomainError("evaluate: positive class '" + pos + "' not among classes");
      m.precision = m.class_precision[it->second];
      m.recall = m.class_recall[it->second];
      m.f1 = m.class_f1[it->second];
      break;
    }
    case Averaging::macro: {
      const double kk = static_cast<double>(k);
      m.precision = std::accumulate(m.class_precision.begin(), m.class_precision.end(), 0.0) / kk;
      m.recall = std::accumulate(m.class_recall.begin(), m.class_recall.end(), 0.0) / kk;
      m.f1 = std::accumulate(m.class_f1.begin(), m.class_f1.end(), 0.0) / kk;
      break;
    }
    case Averaging::weighted: {
      const double n = static_cast<double>(gold.size());
      for (std::size_t c = 0; c < k; ++c) {
        const double w = static_cast<double>(m.support[c]) / n;
        m.precision += w * m.class_precision[c];
        m.recall += w * m.class_recall[c];
        m.f1 += w * m.class_f1[c];
      }
      break;
    }
  }
  return m;
}

CoefficientTable coefficient_report(const LogisticModel& model) {
  CoefficientTable t;
  t.features = model.feature_names;
  if (model.is_binary()) {
    t.columns = {model.classes[1]};
  } else {
    t.columns = model.classes;
  }
  t.values = model.weights.transpose();
  return t;
}

std::vector<std::size_t> kfold_assign(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DomainError("k-fold needs k >= 2");
  if (k > n) throw DomainError("k-fold: k=" + std::to_string(k) + " exceeds " + std::to_string(n) + " rows");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);
  std::vector<std::size_t> fold(n);
  for (std::size_t pos = 0; pos < n; ++pos) fold[order[pos]] = pos % k;
  return fold;
}

}  // namespace moralframe
