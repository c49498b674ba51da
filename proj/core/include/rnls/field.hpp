#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rnls/grid.hpp"

namespace rnls {

using cplx = std::complex<double>;
using Point = std::array<double, 3>;

template <typename T>
class BasicField {
 public:
  BasicField() = default;
  explicit BasicField(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size()) {}
  BasicField(GridPtr grid, std::vector<T> values);

  /// Samples f(x) at every grid point; unused axes get coordinate 0.
  template <typename F>
  static BasicField sample(GridPtr grid, F&& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }
  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  /// False if any sample is NaN or infinite.
  bool is_finite() const;

  BasicField& operator+=(const BasicField& o);
  BasicField& operator-=(const BasicField& o);
  BasicField& operator*=(T s);

  friend BasicField operator+(BasicField a, const BasicField& b) { return a += b; }
  friend BasicField operator-(BasicField a, const BasicField& b) { return a -= b; }
  friend BasicField operator*(BasicField a, T s) { return a *= s; }
  friend BasicField operator*(T s, BasicField a) { return a *= s; }

 private:
  GridPtr grid_;
  std::vector<T> values_;
};

using ComplexField = BasicField<cplx>;
using RealField = BasicField<double>;

/// Calls f(flat_index, x) for every grid point in storage order.
template <typename F>
void for_each_point(const Grid& grid, F&& f) {
  std::size_t idx = 0;
  Point x{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < grid.points[0]; ++i) {
    x[0] = grid.coordinate(0, i);
    for (std::size_t j = 0; j < grid.points[1]; ++j) {
      x[1] = grid.coordinate(1, j);
      for (std::size_t k = 0; k < grid.points[2]; ++k) {
        x[2] = grid.dim == 3 ? grid.coordinate(2, k) : 0.0;
        f(idx++, x);
      }
    }
  }
}

template <typename T>
template <typename F>
BasicField<T> BasicField<T>::sample(GridPtr grid, F&& f) {
  BasicField out(grid);
  for_each_point(*grid, [&](std::size_t i, const Point& x) { out.values_[i] = static_cast<T>(f(x)); });
  return out;
}

// Pointwise helpers shared across modules.
RealField modulus_squared(const ComplexField& f);
ComplexField to_complex(const RealField& f);
/// <a, b> = sum conj(a) b dV.
cplx inner_product(const ComplexField& a, const ComplexField& b);
double l2_norm_squared(const ComplexField& f);
double max_abs(const ComplexField& f);

}  // namespace rnls
