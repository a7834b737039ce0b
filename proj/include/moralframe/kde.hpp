#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace moralframe {

using Point2 = std::array<double, 2>;

struct KdeGrid {
  std::size_t grid_size = 0;
  // Bounding box of the points padded by 10% of the range on every side.
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  double bandwidth_x = 0, bandwidth_y = 0;
  // density[row * grid_size + col]; row indexes y, col indexes x. Grid nodes
  // include both box edges.
  std::vector<double> density;
  // 33% of the peak grid density: the lowest contour level drawn.
  double iso_level = 0;

  double x_at(std::size_t col) const;
  double y_at(std::size_t row) const;
  double at(std::size_t row, std::size_t col) const { return density[row * grid_size + col]; }
};

inline constexpr double kIsoLevelFraction = 0.33;

// Product Gaussian kernel with per-axis bandwidth. Default bandwidth is
// Scott's rule sigma * n^(-1/6) on each axis (sample stddev); an explicit
// bandwidth is used for both axes. If one axis has zero spread it borrows the
// other axis' bandwidth. DomainError for < 2 points or zero spread overall.
KdeGrid kde_grid(std::span<const Point2> points, std::size_t grid_size,
                 std::optional<double> bandwidth = std::nullopt);

double scott_bandwidth(double stddev, std::size_t n);

}  // namespace moralframe
