#include "rnls/functionals.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rnls/spectral.hpp"

namespace rnls {

RealField potential_field(const GridPtr& grid, const PhysicsParams& params) {
  if (grid->dim != params.dim) throw std::invalid_argument("potential_field: dimension mismatch");
  return RealField::sample(grid, [&](const Point& x) { return potential_at(params, x); });
}

ComplexField apply_angular_momentum(const ComplexField& f, const PhysicsParams& params) {
  const double c = params.rotation_coefficient();
  ComplexField out(f.grid_ptr());
  if (c == 0.0) return out;
  const ComplexField d1 = spectral::derivative(f, 0);
  const ComplexField d2 = spectral::derivative(f, 1);
  const cplx pre{0.0, -c};
  for_each_point(f.grid(), [&](std::size_t i, const Point& x) {
    out[i] = pre * (x[0] * d2[i] - x[1] * d1[i]);
  });
  return out;
}

double second_moment(const ComplexField& f) {
  double s = 0.0;
  for_each_point(f.grid(), [&](std::size_t i, const Point& x) {
    s += (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * std::norm(f[i]);
  });
  return s * f.grid().cell_volume();
}

double sigma_norm2(const ComplexField& f) {
  return spectral::kinetic(f) + second_moment(f) + l2_norm_squared(f);
}

FunctionalReport evaluate(const ComplexField& f, const PhysicsParams& params) {
  if (f.grid().dim != params.dim) throw std::invalid_argument("evaluate: dimension mismatch");
  if (!f.is_finite()) throw std::runtime_error("evaluate: field contains NaN or Inf");
  const Grid& g = f.grid();
  const double dv = g.cell_volume();
  const double q = 0.5 * (params.p + 1.0);

  FunctionalReport r;
  double x2 = 0.0;
  for_each_point(g, [&](std::size_t i, const Point& x) {
    const double rho = std::norm(f[i]);
    r.mass += rho;
    r.potential += potential_at(params, x) * rho;
    r.lp1 += std::pow(rho, q);
    x2 += (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * rho;
  });
  r.mass *= dv;
  r.potential *= dv;
  r.lp1 *= dv;
  x2 *= dv;
  r.kinetic = spectral::kinetic(f);

  if (params.omega_rot != 0.0) {
    const cplx l = inner_product(f, apply_angular_momentum(f, params));
    r.ang_mom = l.real();
    r.ang_mom_imag = l.imag();
    if (std::abs(l.imag()) > 1e-10 * std::max(r.mass, 1e-300) + 1e-300)
      throw std::runtime_error("evaluate: angular momentum has a non-negligible imaginary part");
  }
  r.quad_form = r.kinetic + r.potential + 2.0 * r.ang_mom;
  r.energy = 0.5 * r.quad_form - 2.0 / (params.p + 1.0) * r.lp1;
  r.sigma_norm2 = r.kinetic + x2 + r.mass;
  return r;
}

StationaryFunctionals stationary_functionals(const FunctionalReport& r, const PhysicsParams& params,
                                             double omega) {
  const double p = params.p;
  const double n = params.dim;
  StationaryFunctionals s;
  s.action = 0.5 * r.quad_form + 0.5 * omega * r.mass - 2.0 / (p + 1.0) * r.lp1;
  s.nehari = r.quad_form + omega * r.mass - 2.0 * r.lp1;
  s.pohozaev = 0.5 * r.kinetic - 0.5 * r.potential - n * (p - 1.0) / (2.0 * (p + 1.0)) * r.lp1;
  return s;
}

StationaryFunctionals stationary_functionals(const ComplexField& f, const PhysicsParams& params,
                                             double omega) {
  return stationary_functionals(evaluate(f, params), params, omega);
}

double gn_ratio(const ComplexField& f, const PhysicsParams& params) {
  const double m = l2_norm_squared(f);
  if (!(m > 0.0)) throw std::invalid_argument("gn_ratio: zero field");
  const double p = params.p;
  const double n = params.dim;
  const double q = 0.5 * (p + 1.0);
  double lp1 = 0.0;
  for (const auto& v : f.values()) lp1 += std::pow(std::norm(v), q);
  lp1 *= f.grid().cell_volume();
  const double a = n * (p - 1.0) / 2.0;
  const double grad = std::sqrt(spectral::kinetic(f));
  return lp1 / (std::pow(grad, a) * std::pow(std::sqrt(m), p + 1.0 - a));
}

double emii_bound_check(const ComplexField& f, const PhysicsParams& params, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("emii_bound_check: a must be positive");
  const double w = params.omega_rot;
  double l = 0.0;
  if (w != 0.0) l = inner_product(f, apply_angular_momentum(f, params)).real();
  return w * w / (2.0 * a) * second_moment(f) + 0.5 * a * spectral::kinetic(f) - std::abs(l);
}

void write_csv_row(std::ostream& os, double t, const FunctionalReport& r) {
  const auto saved = os.precision(17);
  os << t << ',' << r.mass << ',' << r.kinetic << ',' << r.potential << ',' << r.lp1 << ','
     << r.ang_mom << ',' << r.quad_form << ',' << r.energy << ',' << r.sigma_norm2;
  os.precision(saved);
}

}  // namespace rnls
