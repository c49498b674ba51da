#include "rnls/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rnls/functionals.hpp"
#include "rnls/operators.hpp"
#include "rnls/spectral.hpp"
#include "rnls/spectrum.hpp"

namespace rnls {

std::string to_string(GroundStateSource s) {
  return s == GroundStateSource::nehari ? "nehari" : "local";
}

namespace {

void check_regime(const PhysicsParams& params, const GridPtr& grid) {
  params.validate();
  if (grid->dim != params.dim) throw std::invalid_argument("ground state: dimension mismatch");
  if (!(params.omega_rot < params.gamma_min()))
    throw std::invalid_argument("ground state: requires |Omega| < gamma");
}

double lambda0_of(const PhysicsParams& params, const GridPtr& grid, const SolverOptions& opt) {
  if (opt.lambda0) return *opt.lambda0;
  EigenOptions eo;
  eo.tol = 1e-11;
  return lowest_eigenpair(grid, params, eo).lambda0;
}

// Smooth random modulation of a positive profile, reproducible from the seed.
void perturb(ComplexField& u, std::uint64_t seed) {
  if (seed == 0) return;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::array<double, 10> c{};
  for (auto& v : c) v = dist(rng);
  for_each_point(u.grid(), [&](std::size_t i, const Point& x) {
    const double re = 1.0 + 0.2 * (c[0] * x[0] + c[1] * x[1] + c[2] * x[0] * x[1] +
                                   c[3] * (x[0] * x[0] - x[1] * x[1]) + c[4] * x[2]);
    const double im = 0.2 * (c[5] * x[0] + c[6] * x[1] + c[7] * x[0] * x[1] + c[8] + c[9] * x[2]);
    u[i] *= cplx{re, im};
  });
}

void fill_report(GroundState& gs, const QuadraticOperator& op) {
  const FunctionalReport fr = evaluate(gs.field, gs.params);
  const StationaryFunctionals sf = stationary_functionals(fr, gs.params, gs.omega);
  gs.mass = fr.mass;
  gs.quad_form = fr.quad_form;
  gs.lp1 = fr.lp1;
  gs.energy = fr.energy;
  gs.action = sf.action;
  gs.residual = stationary_residual(op, gs.field, gs.omega);
  gs.relative_residual = gs.residual / std::sqrt(fr.sigma_norm2);
  gs.nehari_residual = std::abs(sf.nehari) / (fr.quad_form + std::abs(gs.omega) * fr.mass);
}

}  // namespace

double nehari_kappa(const ComplexField& f, double omega, const PhysicsParams& params) {
  const FunctionalReport r = evaluate(f, params);
  const double form = r.quad_form + omega * r.mass;
  if (!(r.lp1 > 0.0)) throw std::invalid_argument("nehari_project: zero nonlinear norm");
  if (!(form > 0.0)) throw std::invalid_argument("nehari_project: nonpositive form value");
  return std::pow(form / (2.0 * r.lp1), 1.0 / (params.p - 1.0));
}

ComplexField nehari_project(const ComplexField& f, double omega, const PhysicsParams& params) {
  return f * cplx{nehari_kappa(f, omega, params), 0.0};
}

GroundState minimize_nehari(double omega, const PhysicsParams& params, const GridPtr& grid,
                            const SolverOptions& options) {
  check_regime(params, grid);
  const double lambda0 = lambda0_of(params, grid, options);
  if (!(omega > lambda0)) throw std::invalid_argument("minimize_nehari: requires omega > lambda0");

  const QuadraticOperator op(grid, params);
  ComplexField u;
  if (options.initial) {
    u = *options.initial;
  } else {
    const double w = std::sqrt(std::max(omega, 0.0));
    u = ComplexField::sample(grid, [&](const Point& x) {
      double e = 0.0;
      for (int a = 0; a < params.dim; ++a) e += std::max(params.gammas[a], w) * x[a] * x[a];
      return cplx{std::exp(-0.5 * e), 0.0};
    });
  }
  perturb(u, options.seed);
  u = nehari_project(u, omega, params);

  GroundState gs;
  gs.params = params;
  gs.source = GroundStateSource::nehari;
  gs.omega = omega;
  gs.lambda0 = lambda0;

  auto action = [&](const ComplexField& v) {
    return stationary_functionals(v, params, omega).action;
  };
  double s_cur = action(u);
  ComplexField w = u;
  for (gs.iterations = 0; gs.iterations < options.max_iterations; ++gs.iterations) {
    const ComplexField nu = nonlinear_term(u, params.p);
    ComplexField res = op.apply(u, omega);
    res -= nu;
    const double rel = std::sqrt(l2_norm_squared(res) / sigma_norm2(u));
    if (rel < options.tol) {
      gs.converged = true;
      break;
    }
    op.solve(nu, omega, w, std::clamp(1e-2 * rel, 1e-14, 1e-6), 1000);
    // Descent along the H-gradient u - w, then back onto the manifold.
    double tau = 1.0;
    ComplexField next;
    double s_next = 0.0;
    for (int k = 0; k < 12; ++k, tau *= 0.5) {
      next = u + (w - u) * cplx{tau, 0.0};
      next = nehari_project(next, omega, params);
      s_next = action(next);
      if (s_next <= s_cur + 1e-13 * std::abs(s_cur)) break;
    }
    u = std::move(next);
    s_cur = s_next;
  }
  gs.field = std::move(u);
  fill_report(gs, op);
  gs.d_omega = gs.action;
  return gs;
}

LocalMinimizationSpec make_local_spec(double q, double r, const PhysicsParams& params,
                                      double c_gn) {
  const double p = params.p, n = params.dim;
  LocalMinimizationSpec s;
  s.q = q;
  s.r = r;
  s.chi = 0.5 * (p + 1.0 - n * (p - 1.0) / 2.0);
  s.delta = (n * (p - 1.0) - 4.0) / 4.0;
  const double c_h = 1.0 / (1.0 - params.omega_rot / params.gamma_min());
  s.constant = 2.0 * c_gn / (p + 1.0) * std::pow(c_h, n * (p - 1.0) / 4.0);
  // The shell (rq, r) is empty unless q < 1.
  s.q0_estimate = std::min(1.0, std::pow(6.0 * s.constant * std::pow(r, s.delta), -1.0 / s.chi));
  return s;
}

double gamma_q(const LocalMinimizationSpec& spec, double q, double t) {
  return 0.5 * t * (1.0 - 2.0 * spec.constant * std::pow(q, spec.chi) * std::pow(t, spec.delta));
}

GapReport wellposedness_gap(const LocalMinimizationSpec& spec, double q_probe) {
  GapReport g;
  g.phi_at_qr2 = 0.25 * q_probe * spec.r;
  // Gamma_q is concave in t, so its infimum over an interval sits at an end.
  g.gamma_inf = std::min(gamma_q(spec, q_probe, spec.r * q_probe), gamma_q(spec, q_probe, spec.r));
  g.gap = g.gamma_inf - g.phi_at_qr2;
  g.q0 = spec.q0_estimate;
  return g;
}

GroundState minimize_local(const LocalMinimizationSpec& spec, const PhysicsParams& params,
                           const GridPtr& grid, const SolverOptions& options) {
  check_regime(params, grid);
  if (!(spec.q > 0.0) || !(spec.r > 0.0))
    throw std::invalid_argument("minimize_local: q and r must be positive");
  EigenOptions eo;
  eo.tol = 1e-11;
  const EigenResult eig = lowest_eigenpair(grid, params, eo);
  if (spec.q > spec.r / eig.mu0)
    throw std::invalid_argument("minimize_local: D_q and B_r do not intersect (q > r/(-lambda0))");
  if (spec.q0_estimate > 0.0 && !(spec.q < spec.q0_estimate))
    throw std::invalid_argument("minimize_local: q must be below the q0 estimate");

  const QuadraticOperator op(grid, params);
  ComplexField u = options.initial ? *options.initial : eig.eigenfield;
  perturb(u, options.seed);
  auto normalize = [&](ComplexField& v) { v *= cplx{std::sqrt(spec.q / l2_norm_squared(v)), 0.0}; };
  normalize(u);

  GroundState gs;
  gs.params = params;
  gs.source = GroundStateSource::local;
  gs.lambda0 = eig.lambda0;
  gs.q = spec.q;
  gs.r = spec.r;

  // Normalized imaginary-time flow with the nonlinearity frozen as a
  // potential: (R + s - 2|u|^{p-1}) u* = s u. Fixed points solve the
  // stationary equation exactly; s keeps the operator positive.
  const double lower = spectral_lower_bound(params);
  double e_cur = evaluate(u, params).energy;
  double relax = 0.5;
  ComplexField x = u;
  RealField well(grid);
  for (gs.iterations = 0; gs.iterations < options.max_iterations; ++gs.iterations) {
    const FunctionalReport fr = evaluate(u, params);
    if (fr.quad_form > spec.r)
      throw std::runtime_error("minimize_local: iterate left the ball t[u] <= r");
    const double omega = (-fr.quad_form + 2.0 * fr.lp1) / fr.mass;
    ComplexField res = op.apply(u, omega);
    res -= nonlinear_term(u, params.p);
    const double rel = std::sqrt(l2_norm_squared(res) / fr.sigma_norm2);
    if (rel < options.tol) {
      gs.converged = true;
      break;
    }
    double wmax = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      well[i] = -2.0 * std::pow(std::norm(u[i]), 0.5 * (params.p - 1.0));
      wmax = std::max(wmax, -well[i]);
    }
    for (int k = 0; k < 30; ++k) {
      const double shift = wmax - relax * lower;
      op.solve(u * cplx{shift, 0.0}, shift, x, std::clamp(1e-2 * rel, 1e-14, 1e-6), 1000, &well);
      ComplexField next = x;
      normalize(next);
      const double e_next = evaluate(next, params).energy;
      if (e_next <= e_cur + 1e-12 * std::abs(e_cur)) {
        u = std::move(next);
        e_cur = std::min(e_cur, e_next);
        break;
      }
      // Smaller effective time step.
      relax = relax > 0.0 ? 0.0 : relax - 1.0;
      x = u;
    }
  }
  gs.field = std::move(u);
  const FunctionalReport fr = evaluate(gs.field, params);
  gs.omega = (-fr.quad_form + 2.0 * fr.lp1) / fr.mass;
  fill_report(gs, op);
  return gs;
}

RescaledState rescale_to_unit_frequency(const GroundState& gs, const GridPtr& target) {
  const double w = gs.omega;
  if (!(w > 0.0)) throw std::invalid_argument("rescale_to_unit_frequency: requires omega > 0");
  const PhysicsParams& pp = gs.params;
  const double p = pp.p, n = pp.dim;

  RescaledState rs;
  rs.omega = w;
  rs.params = pp;
  for (int a = 0; a < pp.dim; ++a) rs.params.gammas[a] = pp.gammas[a] / w;
  rs.params.omega_rot = pp.omega_rot / w;

  // Sampling phi~ on coordinates sqrt(omega) x reproduces the samples of phi.
  GridPtr scaled = scaled_grid(gs.field.grid(), std::sqrt(w));
  const double amp = std::pow(w, -1.0 / (p - 1.0));
  rs.field = ComplexField(scaled, std::vector<cplx>(gs.field.values().begin(), gs.field.values().end()));
  rs.field *= cplx{amp, 0.0};
  if (target) rs.field = spectral::resample(rs.field, target, 1e-8);

  const FunctionalReport orig = evaluate(gs.field, pp);
  const FunctionalReport tilde = evaluate(rs.field, pp);  // unweighted V and L
  const double scale = std::pow(w, 2.0 / (p - 1.0) - n / 2.0);
  rs.mass_ratio_error = std::abs(orig.mass / (scale * tilde.mass) - 1.0);
  rs.ang_mom_scaling_error =
      std::abs(orig.ang_mom - scale * tilde.ang_mom) / std::max(std::abs(orig.ang_mom), 1e-300);
  if (orig.ang_mom == 0.0 && tilde.ang_mom == 0.0) rs.ang_mom_scaling_error = 0.0;
  rs.ratio_lhs = (orig.potential + 2.0 * orig.ang_mom) / orig.lp1;
  rs.ratio_rhs = (tilde.potential / (w * w) + 2.0 * tilde.ang_mom / w) / tilde.lp1;

  const QuadraticOperator op(rs.field.grid_ptr(), rs.params);
  rs.residual = stationary_residual(op, rs.field, 1.0) / std::sqrt(sigma_norm2(rs.field));
  return rs;
}

std::vector<Ls1Point> ls1_trend(const PhysicsParams& params, const std::vector<double>& omegas,
                                double rescaled_half_width, std::size_t points,
                                const SolverOptions& options) {
  std::vector<Ls1Point> out;
  double prev = 0.0;
  for (double w : omegas) {
    if (!(w > prev)) throw std::invalid_argument("ls1_trend: omegas must be positive and increasing");
    prev = w;
    auto grid = make_cubic_grid(params.dim, rescaled_half_width / std::sqrt(w), points);
    const GroundState gs = minimize_nehari(w, params, grid, options);
    const RescaledState rs = rescale_to_unit_frequency(gs);
    const FunctionalReport f = evaluate(rs.field, rs.params);
    out.push_back({w, f.potential + 2.0 * f.ang_mom, f.lp1, gs.relative_residual, gs.converged});
  }
  return out;
}

CertificationReport certify(const GroundState& gs, double residual_tol, double slack_tol) {
  CertificationReport c;
  const PhysicsParams& pp = gs.params;
  const double p = pp.p, n = pp.dim;
  const FunctionalReport fr = evaluate(gs.field, pp);
  const StationaryFunctionals sf = stationary_functionals(fr, pp, gs.omega);
  c.pohozaev_residual = std::abs(2.0 * sf.pohozaev) / fr.kinetic;
  const QuadraticOperator op(gs.field.grid_ptr(), pp);
  c.stationary_residual = stationary_residual(op, gs.field, gs.omega) / std::sqrt(fr.sigma_norm2);
  c.nehari_residual = std::abs(sf.nehari) / (fr.quad_form + std::abs(gs.omega) * fr.mass);
  bool ok = c.pohozaev_residual < residual_tol && c.stationary_residual < residual_tol;

  if (gs.omega > 0.0) {
    const double w = gs.omega;
    const RescaledState rs = rescale_to_unit_frequency(gs);
    const FunctionalReport t = evaluate(rs.field, pp);
    const double g2 = pp.gamma_min() * pp.gamma_min();
    const double o2 = pp.omega_rot * pp.omega_rot;
    const double vw = t.potential / (w * w);
    const double lw = t.ang_mom / w;
    c.ew1_residual = std::abs(t.kinetic - vw - n * (p - 1.0) / (p + 1.0) * t.lp1) / t.kinetic;
    c.ew2_slack = (2.0 * g2 / (g2 - o2) * t.lp1 - vw) / t.lp1;
    const double sni_rhs = o2 / g2 * (n * (p - 1.0) / (p + 1.0) + 2.0 * g2 / (g2 - o2)) * t.lp1;
    c.sni_slack = (sni_rhs - (-vw - 2.0 * lw)) / t.lp1;
    c.er1_slack = (o2 / g2 * t.kinetic - (-vw - 2.0 * lw)) / t.lp1;
    ok = ok && c.ew1_residual < residual_tol && c.ew2_slack >= -slack_tol &&
         c.sni_slack >= -slack_tol && c.er1_slack >= -slack_tol;
  }
  c.passed = ok;
  return c;
}

double instability_indicator(const GroundState& gs) {
  const PhysicsParams& pp = gs.params;
  if (!pp.mass_supercritical())
    throw std::invalid_argument("instability_indicator: requires 1 + 4/N < p < 2^*");
  const double p = pp.p, n = pp.dim;
  const FunctionalReport fr = evaluate(gs.field, pp);
  return 4.0 * fr.potential - n * (p - 1.0) / (p + 1.0) * (n * (p - 1.0) / 2.0 - 2.0) * fr.lp1;
}

ComplexField scaling_dilation(const ComplexField& f, double s) {
  ComplexField g = spectral::dilate(f, s);
  g *= cplx{std::pow(s, 0.5 * f.grid().dim), 0.0};
  return g;
}

double scaling_second_derivative(const ComplexField& phi, const PhysicsParams& params, double h) {
  const double ep = evaluate(scaling_dilation(phi, 1.0 + h), params).energy;
  const double e0 = evaluate(phi, params).energy;
  const double em = evaluate(scaling_dilation(phi, 1.0 - h), params).energy;
  return (ep - 2.0 * e0 + em) / (h * h);
}

double nonradial_mass_fraction(const ComplexField& f, std::size_t rings, std::size_t angles) {
  const Grid& g = f.grid();
  const double rmax = 0.9 * std::min(g.half_width[0], g.half_width[1]);
  const double dr = rmax / static_cast<double>(rings);
  std::vector<Point> pts;
  pts.reserve(rings * angles);
  for (std::size_t i = 0; i < rings; ++i) {
    const double r = (static_cast<double>(i) + 0.5) * dr;
    for (std::size_t k = 0; k < angles; ++k) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(angles);
      pts.push_back({r * std::cos(th), r * std::sin(th), 0.0});
    }
  }
  const std::vector<cplx> vals = spectral::evaluate_at(f, pts);
  double total = 0.0, nonradial = 0.0;
  for (std::size_t i = 0; i < rings; ++i) {
    const double r = (static_cast<double>(i) + 0.5) * dr;
    // Parseval on the ring: the m = 0 share is |mean|^2 against the mean of |u|^2.
    cplx mean = 0.0;
    double power = 0.0;
    for (std::size_t k = 0; k < angles; ++k) {
      mean += vals[i * angles + k];
      power += std::norm(vals[i * angles + k]);
    }
    mean /= static_cast<double>(angles);
    power /= static_cast<double>(angles);
    total += r * power;
    nonradial += r * std::max(power - std::norm(mean), 0.0);
  }
  return total > 0.0 ? nonradial / total : 0.0;
}

}  // namespace rnls
