#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "moralframe/classifier.hpp"
#include "moralframe/error.hpp"

using namespace moralframe;

namespace {

using Labels = std::vector<std::string>;

struct Blobs {
  Eigen::MatrixXd x;
  Labels labels;
  Eigen::VectorXd y;
};

// Two Gaussian blobs per class, well separated along the first feature.
Blobs blobs(std::uint64_t seed, std::size_t per_class, double gap, std::size_t p = 2) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0, 1);
  Blobs b;
  b.x.resize(2 * per_class, p);
  b.y.resize(2 * per_class);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const bool pos = i % 2 == 1;
    for (std::size_t j = 0; j < p; ++j) b.x(i, j) = n(rng) + (j == 0 ? (pos ? gap : -gap) : 0.0);
    b.labels.push_back(pos ? "pos" : "neg");
    b.y(i) = pos ? 1.0 : 0.0;
  }
  return b;
}

double accuracy(const Labels& a, const Labels& b) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hit += a[i] == b[i];
  return static_cast<double>(hit) / static_cast<double>(a.size());
}

}  // namespace

TEST_SUITE("classifier") {
  TEST_CASE("standardize") {
    Eigen::MatrixXd x(2, 2);
    x << 1, 5, 3, 5;
    const auto s = standardize(x);
    CHECK(s.rows(0, 0) == -1.0);
    CHECK(s.rows(1, 0) == 1.0);
    CHECK(s.rows(0, 1) == 0.0);
    CHECK(s.rows(1, 1) == 0.0);
    CHECK(s.params.stddev(1) == 1.0);
    CHECK(s.params.constant_features == std::vector<std::size_t>{1});
    CHECK(s.params.apply(x) == s.rows);
    CHECK_THROWS_AS(standardize(Eigen::MatrixXd(1, 2)), DomainError);
  }

  TEST_CASE("analytic gradient matches central differences") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> n(0, 1);
    const auto b = blobs(1, 15, 1.0, 4);
    const LogisticObjective obj(b.x, b.y, 0.05);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd w(obj.n_params());
      for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = n(rng);
      const Eigen::VectorXd g = obj.gradient(w);
      Eigen::VectorXd fd(w.size());
      const double h = 1e-5;
      for (Eigen::Index j = 0; j < w.size(); ++j) {
        Eigen::VectorXd up = w, down = w;
        up(j) += h;
        down(j) -= h;
        fd(j) = (obj.loss(up) - obj.loss(down)) / (2 * h);
      }
      CHECK((g - fd).norm() / std::max(g.norm(), 1e-12) < 1e-5);
    }
  }

  TEST_CASE("loss trace is non-increasing and separable data is fit") {
    const auto b = blobs(2, 40, 3.0);
    const auto s = standardize(b.x);
    const auto fit = fit_binary(s.rows, b.y, Hyperparams{});
    REQUIRE(fit.loss_trace.size() == fit.iterations + 1);
    for (std::size_t i = 1; i < fit.loss_trace.size(); ++i) CHECK(fit.loss_trace[i] <= fit.loss_trace[i - 1]);
    CHECK(fit.converged);
    CHECK(fit.stop_reason != StopReason::max_iters);
    const auto model = train_logreg(b.x, b.labels);
    CHECK(accuracy(predict(model, b.x).labels, b.labels) == 1.0);
    CHECK(model.classes == Labels{"neg", "pos"});
    CHECK(model.weights(0, 0) > 0.0);
  }

  TEST_CASE("identical features with balanced labels give probability one half") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Constant(6, 3, 2.5);
    const Labels labels{"a", "b", "a", "b", "a", "b"};
    const auto model = train_logreg(x, labels);
    CHECK(model.weights.cwiseAbs().maxCoeff() < 1e-9);
    const auto pred = predict(model, x);
    for (Eigen::Index i = 0; i < 6; ++i) CHECK(pred.probabilities(i, 1) == doctest::Approx(0.5).epsilon(1e-6));
  }

  TEST_CASE("different seeds converge to the same optimum") {
    const auto b = blobs(3, 30, 0.7, 3);
    Hyperparams h1, h2;
    h1.init_scale = h2.init_scale = 1.0;
    h1.seed = 1;
    h2.seed = 99;
    h1.max_iters = h2.max_iters = 50000;
    const auto s = standardize(b.x);
    const auto a = fit_binary(s.rows, b.y, h1);
    const auto c = fit_binary(s.rows, b.y, h2);
    CHECK((a.weights - c.weights).cwiseAbs().maxCoeff() < 1e-4);
    CHECK(std::abs(a.intercept - c.intercept) < 1e-4);
  }

  TEST_CASE("training errors") {
    Eigen::MatrixXd x(3, 1);
    x << 1, 2, 3;
    CHECK_THROWS_AS(train_logreg(x, Labels{"a", "a", "a"}), DataError);
    const auto b = blobs(4, 10, 50.0);
    Hyperparams huge;
    huge.step = 1e6;
    huge.l2_lambda = 10;
    CHECK_THROWS_AS(train_logreg(b.x, b.labels, huge), DataError);
  }

  TEST_CASE("prediction invariants") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0, 1);
    Eigen::MatrixXd x(40, 3);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
    Labels three;
    for (int i = 0; i < 40; ++i) three.push_back(std::string(1, static_cast<char>('a' + i % 3)));
    auto model = train_logreg(x, three);
    CHECK(model.weights.rows() == 3);
    auto pred = predict(model, x);
    for (Eigen::Index i = 0; i < 40; ++i) {
      CHECK(pred.probabilities.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(pred.probabilities.row(i).minCoeff() >= 0.0);
      CHECK(pred.probabilities.row(i).maxCoeff() <= 1.0);
    }
    for (double shift : {-3.0, 0.5, 10.0}) {
      auto shifted = model;
      shifted.intercepts.array() += shift;
      CHECK(predict(shifted, x).labels == pred.labels);
    }
    CHECK_THROWS_AS(predict(model, Eigen::MatrixXd(2, 4)), DomainError);

    auto zero = train_logreg(x, Labels(three.begin(), three.end()));
    zero.classes = {"a", "b"};
    zero.weights = Eigen::MatrixXd::Zero(1, 3);
    zero.intercepts = Eigen::VectorXd::Zero(1);
    const auto half = predict(zero, x);
    for (Eigen::Index i = 0; i < 40; ++i) {
      CHECK(half.probabilities(i, 0) == 0.5);
      CHECK(half.probabilities(i, 1) == 0.5);
    }
  }

  TEST_CASE("evaluate: perfect and all-wrong") {
    const Labels gold{"x", "y", "y", "x"};
    const auto perfect = evaluate(gold, gold, Averaging::macro);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);
    CHECK(perfect.accuracy == 1.0);
    const auto wrong = evaluate(Labels{"y", "x", "x", "y"}, gold, Averaging::binary);
    CHECK(wrong.accuracy == 0.0);
    CHECK(wrong.f1 == 0.0);
    CHECK_THROWS_AS(evaluate(Labels{"x", "z", "x", "x"}, gold, Averaging::macro), DataError);
    CHECK_THROWS_AS(evaluate(Labels{"x"}, gold, Averaging::macro), DomainError);
  }

  TEST_CASE("evaluate: crafted three-class case") {
    // Frozen reference values from scikit-learn's classification metrics.
    const Labels gold{"a", "a", "a", "a", "b", "b", "b", "c", "c", "c"};
    const Labels pred{"a", "a", "b", "c", "b", "b", "a", "c", "c", "c"};
    const auto macro = evaluate(pred, gold, Averaging::macro);
    CHECK(macro.confusion == std::vector<std::vector<std::size_t>>{{2, 1, 1}, {1, 2, 0}, {0, 0, 3}});
    CHECK(macro.accuracy == doctest::Approx(0.7).epsilon(1e-15));
    const double p[] = {0.6666666666666666, 0.6666666666666666, 0.75};
    const double r[] = {0.5, 0.6666666666666666, 1.0};
    const double f[] = {0.5714285714285714, 0.6666666666666666, 0.8571428571428571};
    for (int k = 0; k < 3; ++k) {
      CHECK(macro.class_precision[k] == doctest::Approx(p[k]).epsilon(1e-14));
      CHECK(macro.class_recall[k] == doctest::Approx(r[k]).epsilon(1e-14));
      CHECK(macro.class_f1[k] == doctest::Approx(f[k]).epsilon(1e-14));
    }
    CHECK(macro.precision == doctest::Approx(0.6944444444444443).epsilon(1e-14));
    CHECK(macro.recall == doctest::Approx(0.7222222222222222).epsilon(1e-14));
    CHECK(macro.f1 == doctest::Approx(0.6984126984126985).epsilon(1e-14));
    const auto weighted = evaluate(pred, gold, Averaging::weighted);
    CHECK(weighted.precision == doctest::Approx(0.6916666666666667).epsilon(1e-14));
    CHECK(weighted.recall == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(weighted.f1 == doctest::Approx(0.6857142857142857).epsilon(1e-14));
    CHECK(weighted.support == std::vector<std::size_t>{4, 3, 3});
    CHECK_THROWS_AS(evaluate(pred, gold, Averaging::binary), DomainError);
  }

  TEST_CASE("evaluate: binary positive class and permutation invariance") {
    const Labels gold{"n", "p", "p", "n", "p", "n"};
    const Labels pred{"n", "p", "n", "p", "p", "n"};
    const auto m = evaluate(pred, gold, Averaging::binary);
    CHECK(m.precision == doctest::Approx(2.0 / 3.0));
    CHECK(m.recall == doctest::Approx(2.0 / 3.0));
    const auto as_n = evaluate(pred, gold, Averaging::binary, std::nullopt, std::string("n"));
    CHECK(as_n.precision == doctest::Approx(2.0 / 3.0));

    std::vector<std::size_t> order{5, 2, 0, 4, 1, 3};
    Labels g2, p2;
    for (auto i : order) {
      g2.push_back(gold[i]);
      p2.push_back(pred[i]);
    }
    for (Averaging a : {Averaging::binary, Averaging::macro, Averaging::weighted}) {
      const auto x = evaluate(pred, gold, a), y = evaluate(p2, g2, a);
      CHECK(x.precision == y.precision);
      CHECK(x.recall == y.recall);
      CHECK(x.f1 == y.f1);
      CHECK(x.confusion == y.confusion);
    }
  }

  TEST_CASE("coefficient report shapes") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> n(0, 1);
    Eigen::MatrixXd x(50, 10);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
    Labels two, five;
    for (int i = 0; i < 50; ++i) {
      two.push_back(i % 2 ? "b" : "a");
      five.push_back("g" + std::to_string(i % 5));
    }
    const auto names = frame_feature_names();
    const auto binary = coefficient_report(train_logreg(x, two, {}, names));
    CHECK(binary.columns == Labels{"b"});
    CHECK(binary.values.rows() == 10);
    CHECK(binary.values.cols() == 1);
    const auto multi = coefficient_report(train_logreg(x, five, {}, names));
    CHECK(multi.columns.size() == 5);
    CHECK(multi.values.rows() == 10);
    CHECK(multi.features == names);
    CHECK(names.front() == "bias_care");
    CHECK(names.back() == "intensity_sanctity");
  }

  TEST_CASE("k-fold assignment") {
    const auto folds = kfold_assign(23, 5, 42);
    std::vector<std::size_t> sizes(5, 0);
    for (auto f : folds) ++sizes.at(f);
    CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
    CHECK(kfold_assign(23, 5, 42) == folds);
    CHECK(kfold_assign(23, 5, 43) != folds);
    CHECK_THROWS_AS(kfold_assign(3, 5, 1), DomainError);
    CHECK_THROWS_AS(kfold_assign(10, 1, 1), DomainError);
  }

  TEST_CASE("averaging names") {
    CHECK(parse_averaging("macro") == Averaging::macro);
    CHECK_FALSE(parse_averaging("micro"));
    CHECK(name(Averaging::weighted) == "weighted");
  }
}
