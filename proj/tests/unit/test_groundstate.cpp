#include <cmath>
#include <numbers>

#include "../common/fields.hpp"
#include "doctest.h"
#include "rnls/functionals.hpp"
#include "rnls/groundstate.hpp"
#include "rnls/reference_q.hpp"
#include "rnls/spectrum.hpp"

using namespace rnls;
using namespace rnls::testing;

namespace {

GridPtr resolved_grid() { return make_cubic_grid(2, 6.0, 128); }

const GroundState& p5_state() {
  static const GroundState gs = minimize_nehari(1.0, params2d(5.0, 0.2), resolved_grid());
  return gs;
}

}  // namespace

TEST_CASE("nehari projection") {
  auto g = make_cubic_grid(2, 8.0, 64);
  auto pp = params2d(3.0);
  auto f = gaussian(g);
  CHECK(nehari_kappa(f, 1.0, pp) == doctest::Approx(std::sqrt(3.0 * std::numbers::pi)).epsilon(1e-9));

  auto proj = nehari_project(f, 1.0, pp);
  CHECK(nehari_kappa(proj, 1.0, pp) == doctest::Approx(1.0).epsilon(1e-10));
  auto s = stationary_functionals(proj, pp, 1.0);
  CHECK(std::abs(s.nehari) < 1e-10 * (evaluate(proj, pp).quad_form + l2_norm_squared(proj)));

  auto twice = f;
  twice *= cplx{2.0, 0.0};
  CHECK(max_abs(nehari_project(twice, 1.0, pp) - proj) < 1e-12 * max_abs(proj));

  ComplexField z(g);
  CHECK_THROWS(nehari_project(z, 1.0, pp));
}

TEST_CASE("nehari minimizer certifies") {
  const GroundState& gs = p5_state();
  CHECK(gs.converged);
  CHECK(gs.source == GroundStateSource::nehari);
  CHECK(gs.lambda0 == doctest::Approx(-2.0).epsilon(1e-7));
  CHECK(gs.d_omega > 0.0);
  CHECK(gs.residual < 1e-6);
  CHECK(gs.nehari_residual < 1e-10);
  CHECK(rel(gs.d_omega, (4.0 / 6.0) * gs.lp1) < 1e-9);
  CHECK(rel(gs.action, gs.d_omega) < 1e-12);

  auto c = certify(gs);
  CHECK(c.passed);
  CHECK(c.ew1_residual < 1e-5);
  CHECK(c.sni_slack >= -1e-8);
  CHECK(c.ew2_slack >= -1e-8);
  CHECK(c.er1_slack >= -1e-8);
  CHECK(std::abs(c.pohozaev_residual) < 1e-5);
}

TEST_CASE("nehari value does not depend on the start") {
  auto g = make_cubic_grid(2, 6.0, 64);
  auto pp = params2d(3.0, 0.3);
  SolverOptions a, b;
  a.seed = 3;
  b.seed = 17;
  const double da = minimize_nehari(1.0, pp, g, a).d_omega;
  const double db = minimize_nehari(1.0, pp, g, b).d_omega;
  CHECK(rel(da, db) < 1e-6);
}

TEST_CASE("non-rotating isotropic minimizer is radial") {
  auto g = make_cubic_grid(2, 6.0, 64);
  SolverOptions o;
  o.seed = 5;
  auto gs = minimize_nehari(1.0, params2d(3.0), g, o);
  CHECK(gs.converged);
  CHECK(nonradial_mass_fraction(gs.field) < 1e-8);
  CHECK(nonradial_mass_fraction(vortex(g)) > 0.99);
}

TEST_CASE("nehari regime checks") {
  auto g = make_cubic_grid(2, 6.0, 32);
  CHECK_THROWS_AS(minimize_nehari(-2.5, params2d(3.0), g), std::invalid_argument);
  CHECK_THROWS_AS(minimize_nehari(1.0, params2d(3.0, 1.0), g), std::invalid_argument);
}

TEST_CASE("local minimizer multiplier trend") {
  auto g = make_cubic_grid(2, 8.0, 64);
  auto pp = params2d(5.0, 0.2);
  const QProfile q = solve_q(2, 5.0, 1e-10);
  const double r = 1.0;
  const double lambda0 = lowest_eigenpair(g, pp).lambda0;
  double prev_gap = 1e300;
  for (double frac : {0.1, 0.05, 0.025}) {
    CAPTURE(frac);
    const double mass = frac * r / (-lambda0);
    auto spec = make_local_spec(mass, r, pp, q.c_gn);
    CHECK(spec.chi > 0.0);
    CHECK(spec.delta > 0.0);
    auto gs = minimize_local(spec, pp, g);
    CHECK(gs.converged);
    CHECK(gs.source == GroundStateSource::local);
    CHECK(gs.omega > gs.lambda0);
    CHECK(gs.omega - gs.lambda0 < prev_gap);
    prev_gap = gs.omega - gs.lambda0;
    CHECK(gs.energy < -0.5 * gs.lambda0 * mass + 1e-10);
    CHECK(gs.quad_form <= r);
    CHECK(rel(gs.mass, mass) < 1e-10);
    CHECK(gs.relative_residual < 1e-6);
  }
}

TEST_CASE("tiny mass local minimizer follows the linear ground state") {
  auto g = make_cubic_grid(2, 8.0, 64);
  auto pp = params2d(5.0, 0.2);
  const QProfile q = solve_q(2, 5.0, 1e-10);
  auto spec = make_local_spec(1e-3, 1.0, pp, q.c_gn);
  auto gs = minimize_local(spec, pp, g);
  auto eig = lowest_eigenpair(g, pp).eigenfield;
  const double overlap = std::abs(inner_product(eig, gs.field)) / std::sqrt(gs.mass);
  CHECK(overlap > 0.99);
}

TEST_CASE("local problem preconditions") {
  auto g = make_cubic_grid(2, 8.0, 32);
  auto pp = params2d(5.0, 0.2);
  const QProfile q = solve_q(2, 5.0, 1e-10);
  auto spec = make_local_spec(0.9, 1.0, pp, q.c_gn);  // above r / mu0 = 0.5
  CHECK_THROWS_AS(minimize_local(spec, pp, g), std::invalid_argument);
}

TEST_CASE("well-posedness gap") {
  auto pp = params2d(5.0, 0.2);
  const QProfile q = solve_q(2, 5.0, 1e-10);
  const double r = 1.0;
  auto spec = make_local_spec(0.01, r, pp, q.c_gn);
  const double q0 = spec.q0_estimate;
  CHECK(q0 > 0.0);
  CHECK(wellposedness_gap(spec, 0.5 * q0).gap > 0.0);

  double prev = 0.0;
  for (double f : {0.5, 0.25, 0.1, 0.01, 1e-4}) {
    auto gr = wellposedness_gap(spec, f * q0);
    const double normalized = gr.gap / (f * q0 * r);
    CHECK(normalized >= 1.0 / 12.0);
    CHECK(normalized > prev);
    prev = normalized;
    CHECK(gr.phi_at_qr2 == doctest::Approx(0.25 * f * q0 * r));
  }
  CHECK(prev == doctest::Approx(0.25).epsilon(1e-3));
  // Gamma_q(t) >= t/3 on (0, r) at q0.
  for (double t : {0.1, 0.5, 0.9, 1.0}) CHECK(gamma_q(spec, q0, t) >= t / 3.0 - 1e-12);
}

TEST_CASE("rescaling to unit frequency") {
  const GroundState& gs = p5_state();
  auto rs = rescale_to_unit_frequency(gs);
  CHECK(rs.mass_ratio_error < 1e-12);
  CHECK(rel(rs.ratio_lhs, rs.ratio_rhs) < 1e-6);
  CHECK(rs.ang_mom_scaling_error < 1e-8);
  CHECK(rs.residual < 1e-5);
  CHECK(rs.params.omega_rot == doctest::Approx(0.2));

  GroundState negative = gs;
  negative.omega = -0.5;
  CHECK_THROWS(rescale_to_unit_frequency(negative));
}

TEST_CASE("instability indicator and its scaling cross-check") {
  const GroundState& gs = p5_state();
  const double ind = instability_indicator(gs);
  const double fd = scaling_second_derivative(gs.field, gs.params);
  CHECK(ind < 0.0);
  CHECK(rel(fd, ind) < 1e-4);

  // Threshold arithmetic: negative exactly when the potential share is small.
  const double n = 2, p = 5;
  const double share = gs.lp1 > 0.0 ? evaluate(gs.field, gs.params).potential / gs.lp1 : 0.0;
  CHECK((share < n * (p - 1) * (n * (p - 1) - 4) / (8 * (p + 1))) == (ind < 0.0));

  GroundState cubic = gs;
  cubic.params.p = 3.0;
  CHECK_THROWS_AS(instability_indicator(cubic), std::invalid_argument);
}

TEST_CASE("indicator turns negative along a frequency sweep") {
  auto g = make_cubic_grid(2, 6.0, 64);
  auto pp = params2d(5.0, 0.2);
  const double near = instability_indicator(minimize_nehari(-1.5, pp, g));
  const double far = instability_indicator(minimize_nehari(3.0, pp, g));
  CHECK(near > 0.0);
  CHECK(far < 0.0);
}

TEST_CASE("certification without rotation") {
  auto g = make_cubic_grid(2, 6.0, 64);
  auto gs = minimize_nehari(1.0, params2d(3.0), g);
  auto c = certify(gs);
  CHECK(c.sni_slack >= 0.0);
  CHECK(c.ew1_residual < 1e-5);
}

TEST_CASE("rescaled potential term decreases along increasing omega") {
  auto pts = ls1_trend(params2d(5.0, 0.05), {0.5, 1.0, 2.0}, 6.0, 64);
  REQUIRE(pts.size() == 3u);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].converged);
    if (i > 0) CHECK(pts[i].quantity < pts[i - 1].quantity);
  }
  CHECK_THROWS_AS(ls1_trend(params2d(5.0, 0.05), {2.0, 1.0}, 6.0, 64), std::invalid_argument);
}
