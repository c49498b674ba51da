#include "rnls/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "rnls/functionals.hpp"
#include "rnls/spectral.hpp"

namespace rnls {

QuadraticOperator::QuadraticOperator(GridPtr grid, const PhysicsParams& params)
    : grid_(std::move(grid)), params_(params), potential_(potential_field(grid_, params)) {
  const Grid& g = *grid_;
  k2_.resize(g.size());
  std::size_t idx = 0;
  for (std::size_t i = 0; i < g.points[0]; ++i)
    for (std::size_t j = 0; j < g.points[1]; ++j)
      for (std::size_t l = 0; l < g.points[2]; ++l, ++idx)
        k2_[idx] = g.wavenumbers[0][i] * g.wavenumbers[0][i] +
                   g.wavenumbers[1][j] * g.wavenumbers[1][j] +
                   g.wavenumbers[2][l] * g.wavenumbers[2][l];
}

ComplexField QuadraticOperator::apply(const ComplexField& u, double shift,
                                      const RealField* extra) const {
  const Grid& g = *grid_;
  ComplexField F = spectral::forward(u);

  ComplexField out = F;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= k2_[i];
  spectral::inverse_inplace(out.values(), g);

  for (std::size_t i = 0; i < out.size(); ++i) out[i] += (potential_[i] + shift) * u[i];
  if (extra)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += (*extra)[i] * u[i];

  const double c = params_.rotation_coefficient();
  if (c != 0.0) {
    // 2L u = -2ic (x1 d2 u - x2 d1 u); derivatives share the transform above.
    ComplexField d1 = F, d2 = F;
    const std::size_t n0 = g.points[0], n1 = g.points[1];
    std::size_t idx = 0;
    for (std::size_t i = 0; i < g.points[0]; ++i)
      for (std::size_t j = 0; j < g.points[1]; ++j)
        for (std::size_t l = 0; l < g.points[2]; ++l, ++idx) {
          d1[idx] = i == n0 / 2 ? cplx{} : cplx{0.0, g.wavenumbers[0][i]} * d1[idx];
          d2[idx] = j == n1 / 2 ? cplx{} : cplx{0.0, g.wavenumbers[1][j]} * d2[idx];
        }
    spectral::inverse_inplace(d1.values(), g);
    spectral::inverse_inplace(d2.values(), g);
    const cplx pre{0.0, -2.0 * c};
    for_each_point(g, [&](std::size_t i, const Point& x) {
      out[i] += pre * (x[0] * d2[i] - x[1] * d1[i]);
    });
  }
  return out;
}

double QuadraticOperator::form(const ComplexField& u) const {
  return inner_product(u, apply(u)).real();
}

ComplexField QuadraticOperator::precondition(const ComplexField& r, double shift) const {
  // Symmetric combination (a+V)^{-1/2} (a - Lap)^{-1} (a+V)^{-1/2}; CG is
  // invariant to its overall scale.
  const double a = std::max(shift, 0.0) + 1.0;
  ComplexField z = r;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] /= std::sqrt(a + potential_[i]);
  spectral::forward_inplace(z.values(), *grid_);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] /= a + k2_[i];
  spectral::inverse_inplace(z.values(), *grid_);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] /= std::sqrt(a + potential_[i]);
  return z;
}

CgReport QuadraticOperator::solve(const ComplexField& b, double shift, ComplexField& x,
                                  double rtol, int max_iterations, const RealField* extra) const {
  CgReport rep;
  const double bnorm = std::sqrt(l2_norm_squared(b));
  if (bnorm == 0.0) {
    x = ComplexField(grid_);
    rep.converged = true;
    return rep;
  }
  if (x.empty()) x = ComplexField(grid_);
  ComplexField r = b - apply(x, shift, extra);
  ComplexField z = precondition(r, shift);
  ComplexField d = z;
  double rz = inner_product(r, z).real();
  for (rep.iterations = 0; rep.iterations < max_iterations; ++rep.iterations) {
    rep.relative_residual = std::sqrt(l2_norm_squared(r)) / bnorm;
    if (rep.relative_residual <= rtol) {
      rep.converged = true;
      return rep;
    }
    const ComplexField ad = apply(d, shift, extra);
    const double dad = inner_product(d, ad).real();
    if (!(dad > 0.0)) throw std::runtime_error("QuadraticOperator::solve: operator not positive");
    const double alpha = rz / dad;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += alpha * d[i];
      r[i] -= alpha * ad[i];
    }
    z = precondition(r, shift);
    const double rz_new = inner_product(r, z).real();
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = z[i] + beta * d[i];
  }
  rep.relative_residual = std::sqrt(l2_norm_squared(r)) / bnorm;
  rep.converged = rep.relative_residual <= rtol;
  return rep;
}

ComplexField nonlinear_term(const ComplexField& u, double p) {
  ComplexField out = u;
  const double e = 0.5 * (p - 1.0);
  for (auto& v : out.values()) v *= 2.0 * std::pow(std::norm(v), e);
  return out;
}

double stationary_residual(const QuadraticOperator& op, const ComplexField& phi, double omega) {
  ComplexField res = op.apply(phi, omega);
  res -= nonlinear_term(phi, op.params().p);
  return std::sqrt(l2_norm_squared(res));
}

}  // namespace rnls
