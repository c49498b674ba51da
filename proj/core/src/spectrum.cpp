#include "rnls/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "rnls/operators.hpp"

namespace rnls {

double spectral_lower_bound(const PhysicsParams& params) {
  double s = 0.0;
  for (int a = 0; a < params.dim; ++a) s += params.gammas[a];
  return (1.0 - params.omega_rot / params.gamma_min()) * s;
}

EigenResult lowest_eigenpair(const GridPtr& grid, const PhysicsParams& params,
                             const EigenOptions& options) {
  params.validate();
  if (grid->dim != params.dim) throw std::invalid_argument("lowest_eigenpair: dimension mismatch");
  if (!(params.omega_rot < params.gamma_min()))
    throw std::invalid_argument("lowest_eigenpair: requires |Omega| < gamma");

  const QuadraticOperator op(grid, params);
  ComplexField u = options.initial
                       ? *options.initial
                       : ComplexField::sample(grid, [&](const Point& x) {
                           double e = 0.0;
                           for (int a = 0; a < params.dim; ++a) e += params.gammas[a] * x[a] * x[a];
                           return cplx{std::exp(-0.5 * e), 0.0};
                         });
  u *= cplx{1.0 / std::sqrt(l2_norm_squared(u)), 0.0};

  // Each step is the infinite-step limit of backward Euler for the flow
  // u_t = -(R - c) u; the energy reference c sits below the spectrum.
  const double shift = -0.9 * spectral_lower_bound(params);

  EigenResult res;
  double rho = op.form(u);
  res.history.push_back(rho);
  ComplexField x;
  for (res.iterations = 1; res.iterations <= options.max_iterations; ++res.iterations) {
    if (x.empty()) x = u * cplx{1.0 / (rho + shift), 0.0};
    op.solve(u, shift, x, 1e-13, 400);
    u = x * cplx{1.0 / std::sqrt(l2_norm_squared(x)), 0.0};
    x *= cplx{1.0 / std::sqrt(l2_norm_squared(x)) / (rho + shift), 0.0};

    const ComplexField ru = op.apply(u);
    const double rho_new = inner_product(u, ru).real();
    ComplexField r = ru - u * cplx{rho_new, 0.0};
    res.residual = std::sqrt(l2_norm_squared(r));
    res.history.push_back(rho_new);
    const double change = std::abs(rho_new - rho);
    rho = rho_new;
    if (change < options.tol && res.residual < 10.0 * options.tol) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(res.iterations, options.max_iterations);
  res.mu0 = rho;
  res.lambda0 = -rho;
  res.eigenfield = std::move(u);
  return res;
}

}  // namespace rnls
