#include "moralframe/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "moralframe/error.hpp"

namespace moralframe {

namespace {

double sample_stddev(std::span<const Point2> points, std::size_t axis) {
  double mean = 0.0;
  for (const auto& p : points) mean += p[axis];
  mean /= static_cast<double>(points.size());
  double ss = 0.0;
  for (const auto& p : points) ss += (p[axis] - mean) * (p[axis] - mean);
  return std::sqrt(ss / static_cast<double>(points.size() - 1));
}

double node(double lo, double hi, std::size_t i, std::size_t n) {
  if (n == 1) return 0.5 * (lo + hi);
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

double scott_bandwidth(double stddev, std::size_t n) {
  return stddev * std::pow(static_cast<double>(n), -1.0 / 6.0);
}

double KdeGrid::x_at(std::size_t col) const { return node(x_min, x_max, col, grid_size); }
double KdeGrid::y_at(std::size_t row) const { return node(y_min, y_max, row, grid_size); }

KdeGrid kde_grid(std::span<const Point2> points, std::size_t grid_size,
                 std::optional<double> bandwidth) {
  if (points.size() < 2) throw DomainError("kde_grid: need at least 2 points");
  if (grid_size == 0) throw DomainError("kde_grid: grid_size must be positive");
  for (const auto& p : points) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw DomainError("kde_grid: non-finite point");
  }

  KdeGrid g;
  g.grid_size = grid_size;
  if (bandwidth) {
    if (!(*bandwidth > 0.0) || !std::isfinite(*bandwidth)) {
      throw DomainError("kde_grid: bandwidth must be positive and finite");
    }
    g.bandwidth_x = g.bandwidth_y = *bandwidth;
  } else {
    const double sx = sample_stddev(points, 0);
    const double sy = sample_stddev(points, 1);
    if (sx == 0.0 && sy == 0.0) throw DomainError("kde_grid: points coincide (zero spread)");
    g.bandwidth_x = scott_bandwidth(sx > 0.0 ? sx : sy, points.size());
    g.bandwidth_y = scott_bandwidth(sy > 0.0 ? sy : sx, points.size());
  }

  auto [xmin_it, xmax_it] = std::minmax_element(points.begin(), points.end(),
                                                [](const auto& a, const auto& b) { return a[0] < b[0]; });
  auto [ymin_it, ymax_it] = std::minmax_element(points.begin(), points.end(),
                                                [](const auto& a, const auto& b) { return a[1] < b[1]; });
  const double x_range = (*xmax_it)[0] - (*xmin_it)[0];
  const double y_range = (*ymax_it)[1] - (*ymin_it)[1];
  const double x_pad = x_range > 0.0 ? 0.1 * x_range : 3.0 * g.bandwidth_x;
  const double y_pad = y_range > 0.0 ? 0.1 * y_range : 3.0 * g.bandwidth_y;
  g.x_min = (*xmin_it)[0] - x_pad;
  g.x_max = (*xmax_it)[0] + x_pad;
  g.y_min = (*ymin_it)[1] - y_pad;
  g.y_max = (*ymax_it)[1] + y_pad;

  const double hx = g.bandwidth_x;
  const double hy = g.bandwidth_y;
  const double norm =
      1.0 / (2.0 * std::numbers::pi * hx * hy * static_cast<double>(points.size()));
  g.density.assign(grid_size * grid_size, 0.0);
  double peak = 0.0;
  for (std::size_t row = 0; row < grid_size; ++row) {
    const double y = g.y_at(row);
    for (std::size_t col = 0; col < grid_size; ++col) {
      const double x = g.x_at(col);
      double sum = 0.0;
      for (const auto& p : points) {
        const double dx = (x - p[0]) / hx;
        const double dy = (y - p[1]) / hy;
        sum += std::exp(-0.5 * (dx * dx + dy * dy));
      }
      const double d = sum * norm;
      g.density[row * grid_size + col] = d;
      peak = std::max(peak, d);
    }
  }
  g.iso_level = kIsoLevelFraction * peak;
  return g;
}

}  // namespace moralframe
