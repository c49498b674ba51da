#include "rnls/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rnls {

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (&a != &b && !a.same_shape(b)) throw std::invalid_argument("field grid mismatch");
}

bool finite(double v) { return std::isfinite(v); }
bool finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

template <typename T>
BasicField<T>::BasicField(GridPtr grid, std::vector<T> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_ || values_.size() != grid_->size())
    throw std::invalid_argument("field values length does not match grid");
}

template <typename T>
bool BasicField<T>::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](const T& v) { return finite(v); });
}

template <typename T>
BasicField<T>& BasicField<T>::operator+=(const BasicField& o) {
  require_same_grid(*grid_, *o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

template <typename T>
BasicField<T>& BasicField<T>::operator-=(const BasicField& o) {
  require_same_grid(*grid_, *o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

template <typename T>
BasicField<T>& BasicField<T>::operator*=(T s) {
  for (auto& v : values_) v *= s;
  return *this;
}

template class BasicField<cplx>;
template class BasicField<double>;

RealField modulus_squared(const ComplexField& f) {
  RealField out(f.grid_ptr());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::norm(f[i]);
  return out;
}

ComplexField to_complex(const RealField& f) {
  ComplexField out(f.grid_ptr());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

cplx inner_product(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid(), b.grid());
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s * a.grid().cell_volume();
}

double l2_norm_squared(const ComplexField& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  return s * f.grid().cell_volume();
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace rnls
