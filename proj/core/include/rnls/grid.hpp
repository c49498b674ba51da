#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace rnls {

/// Uniform periodic grid on the box prod_j [-L_j, L_j).
///
/// Samples are stored row-major with axis 0 (x1) slowest. Unused axes of a
/// 2D grid carry one point so that 3-index loops work for both dimensions.
struct Grid {
  int dim = 2;
  std::array<double, 3> half_width{1.0, 1.0, 1.0};
  std::array<std::size_t, 3> points{1, 1, 1};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  /// Standard FFT ordering: 0, 1, ..., n/2-1, -n/2, ..., -1 (times 2pi/2L).
  std::array<std::vector<double>, 3> wavenumbers;

  std::size_t size() const { return points[0] * points[1] * points[2]; }
  double cell_volume() const;
  double coordinate(int axis, std::size_t i) const {
    return -half_width[axis] + static_cast<double>(i) * spacing[axis];
  }
  std::vector<double> coordinates(int axis) const;
  std::size_t stride(int axis) const;
  /// Largest resolved wavenumber pi/h_j.
  double nyquist(int axis) const;

  bool same_shape(const Grid& other) const;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws std::invalid_argument on dim outside {2,3}, mismatched lengths,
/// point counts that are not powers of two >= 8, or non-positive extents.
GridPtr make_grid(int dim, std::span<const double> half_widths,
                  std::span<const std::size_t> points);

/// Convenience for the common equal-axes case.
GridPtr make_cubic_grid(int dim, double half_width, std::size_t points);

/// Same point counts, extents multiplied by `factor` (used for frequency
/// rescaling of ground states).
GridPtr scaled_grid(const Grid& grid, double factor);

}  // namespace rnls
