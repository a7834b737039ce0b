#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "moralframe/error.hpp"
#include "moralframe/kde.hpp"

using namespace moralframe;

namespace {

std::size_t strict_local_maxima(const KdeGrid& g) {
  std::size_t count = 0;
  const std::size_t n = g.grid_size;
  for (std::size_t r = 1; r + 1 < n; ++r) {
    for (std::size_t c = 1; c + 1 < n; ++c) {
      bool is_max = true;
      for (int dr = -1; dr <= 1 && is_max; ++dr)
        for (int dc = -1; dc <= 1 && is_max; ++dc)
          if ((dr || dc) && g.at(r + dr, c + dc) >= g.at(r, c)) is_max = false;
      count += is_max;
    }
  }
  return count;
}

}  // namespace

TEST_SUITE("kde") {
  TEST_CASE("single cluster peaks at the origin") {
    const std::vector<Point2> pts{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0, 0}};
    const auto g = kde_grid(pts, 41);
    CHECK(g.x_min == doctest::Approx(-1.2));
    CHECK(g.x_max == doctest::Approx(1.2));
    const auto peak = std::max_element(g.density.begin(), g.density.end()) - g.density.begin();
    CHECK(static_cast<std::size_t>(peak) == 20 * 41 + 20);
    CHECK(std::abs(g.x_at(20)) < 1e-12);
    CHECK(std::abs(g.y_at(20)) < 1e-12);
    CHECK(strict_local_maxima(g) == 1);
  }

  TEST_CASE("densities non-negative and iso level is 33% of the peak") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0, 1);
    std::vector<Point2> pts(50);
    for (auto& p : pts) p = {n(rng), 3 * n(rng)};
    const auto g = kde_grid(pts, 30);
    CHECK(g.density.size() == 900);
    CHECK(*std::min_element(g.density.begin(), g.density.end()) >= 0.0);
    CHECK(g.iso_level == doctest::Approx(0.33 * *std::max_element(g.density.begin(), g.density.end())));
  }

  TEST_CASE("two separated clusters give two local maxima") {
    // Each cluster is a 5x5 lattice with spacing 0.25 around (+-5, 0).
    std::vector<Point2> pts;
    for (double cx : {-5.0, 5.0})
      for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) pts.push_back({cx + 0.25 * i, 0.25 * j});
    const auto g = kde_grid(pts, 81);
    CHECK(strict_local_maxima(g) == 2);
  }

  TEST_CASE("density integrates to about one") {
    const std::vector<Point2> pts{{0, 0}, {10, 0}, {0, 10}, {10, 10}, {5, 5}};
    const auto g = kde_grid(pts, 201, 0.3);
    double sum = 0;
    for (double d : g.density) sum += d;
    const double cell = (g.x_max - g.x_min) / 200.0 * (g.y_max - g.y_min) / 200.0;
    CHECK(sum * cell == doctest::Approx(1.0).epsilon(0.01));
  }

  TEST_CASE("Scott's rule") {
    CHECK(scott_bandwidth(1.0, 64) == doctest::Approx(0.5).epsilon(1e-15));
    const std::vector<Point2> pts{{0, 0}, {2, 0}};
    const auto g = kde_grid(pts, 5);
    // Sample stddev sqrt(2); y has zero spread and borrows x.
    CHECK(g.bandwidth_x == doctest::Approx(std::sqrt(2.0) * std::pow(2.0, -1.0 / 6.0)));
    CHECK(g.bandwidth_y == g.bandwidth_x);
  }

  TEST_CASE("errors") {
    const std::vector<Point2> same{{1, 1}, {1, 1}};
    CHECK_THROWS_AS(kde_grid(same, 10), DomainError);
    const std::vector<Point2> one{{1, 1}};
    CHECK_THROWS_AS(kde_grid(one, 10), DomainError);
    const std::vector<Point2> two{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(kde_grid(two, 10, -1.0), DomainError);
  }
}
