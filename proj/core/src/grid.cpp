#include "rnls/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rnls {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing[a];
  return v;
}

std::vector<double> Grid::coordinates(int axis) const {
  std::vector<double> x(points[axis]);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = coordinate(axis, i);
  return x;
}

std::size_t Grid::stride(int axis) const {
  std::size_t s = 1;
  for (int a = 2; a > axis; --a) s *= points[a];
  return s;
}

double Grid::nyquist(int axis) const { return std::numbers::pi / spacing[axis]; }

bool Grid::same_shape(const Grid& other) const {
  if (dim != other.dim) return false;
  for (int a = 0; a < 3; ++a) {
    if (points[a] != other.points[a]) return false;
    if (a < dim && half_width[a] != other.half_width[a]) return false;
  }
  return true;
}

GridPtr make_grid(int dim, std::span<const double> half_widths,
                  std::span<const std::size_t> points) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("grid dimension must be 2 or 3, got " + std::to_string(dim));
  if (half_widths.size() != static_cast<std::size_t>(dim) ||
      points.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("grid: half_widths/points length must equal dim");

  auto g = std::make_shared<Grid>();
  g->dim = dim;
  for (int a = 0; a < dim; ++a) {
    const double L = half_widths[a];
    const std::size_t n = points[a];
    if (!(L > 0.0) || !std::isfinite(L))
      throw std::invalid_argument("grid: half width must be positive on axis " + std::to_string(a));
    if (n < 8 || n % 2 != 0 || !is_power_of_two(n))
      throw std::invalid_argument("grid: point count must be an even power of two >= 8 on axis " +
                                  std::to_string(a) + " (got " + std::to_string(n) + ")");
    g->half_width[a] = L;
    g->points[a] = n;
    g->spacing[a] = 2.0 * L / static_cast<double>(n);
    auto& k = g->wavenumbers[a];
    k.resize(n);
    const double dk = std::numbers::pi / L;
    const auto half = static_cast<long>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
      long m = static_cast<long>(i);
      if (m >= half) m -= static_cast<long>(n);
      k[i] = dk * static_cast<double>(m);
    }
  }
  for (int a = dim; a < 3; ++a) {
    g->points[a] = 1;
    g->half_width[a] = 1.0;
    g->spacing[a] = 1.0;
    g->wavenumbers[a] = {0.0};
  }
  return g;
}

GridPtr make_cubic_grid(int dim, double half_width, std::size_t points) {
  const std::array<double, 3> L{half_width, half_width, half_width};
  const std::array<std::size_t, 3> n{points, points, points};
  return make_grid(dim, std::span(L.data(), dim), std::span(n.data(), dim));
}

GridPtr scaled_grid(const Grid& grid, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scaled_grid: factor must be positive");
  std::array<double, 3> L{};
  for (int a = 0; a < grid.dim; ++a) L[a] = grid.half_width[a] * factor;
  return make_grid(grid.dim, std::span(L.data(), grid.dim),
                   std::span(grid.points.data(), grid.dim));
}

}  // namespace rnls
