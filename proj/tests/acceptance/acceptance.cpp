// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number, e.g. `rnls_acceptance 1 5 11`.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fields.hpp"
#include "rnls/classify.hpp"
#include "rnls/diagnostics.hpp"
#include "rnls/dynamics.hpp"
#include "rnls/functionals.hpp"
#include "rnls/groundstate.hpp"
#include "rnls/reference_q.hpp"
#include "rnls/spectrum.hpp"
#include "rnls/stability.hpp"

using namespace rnls;
using namespace rnls::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

ComplexField smooth_datum(const GridPtr& g) {
  return ComplexField::sample(g, [](const Point& x) {
    return cplx{1.0 + 0.3 * x[0], 0.2 * x[1]} * std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]));
  });
}

double trap_grad_product(const DiagnosticsRow& row, double s) {
  return std::pow(row.grad_norm, s) * std::pow(std::sqrt(row.f.mass), 1.0 - s);
}

// N=2, p=5, |Omega|=0.2 Nehari state at omega=1 on a grid fine enough for the
// Pohozaev identities.
const GroundState& supercritical_state() {
  static const GroundState gs =
      minimize_nehari(1.0, params2d(5.0, 0.2), make_cubic_grid(2, 6.0, 256));
  return gs;
}

const Trajectory& isotropic_run() {
  static const Trajectory tr = [] {
    auto g = make_cubic_grid(2, 8.0, 128);
    SimState s{smooth_datum(g), params2d(3.0, 0.3), 0.0, 0};
    EvolveOptions o;
    o.horizon = 10.0;
    o.dt = 1e-3;
    o.sample_every = 100;
    return evolve(s, o);
  }();
  return tr;
}

void conservation(Outcome& out) {
  const Trajectory& tr = isotropic_run();
  out.detail << "steps=" << tr.steps << " mass_drift=" << tr.mass_drift
             << " energy_drift=" << tr.energy_drift;
  out.require(tr.steps == 10000, "10^4 steps");
  out.require(tr.mass_drift < 1e-10, "mass drift < 1e-10");
  out.require(tr.energy_drift < 1e-6, "energy drift < 1e-6");
}

void angular_momentum(Outcome& out) {
  const Trajectory& iso = isotropic_run();
  out.detail << "isotropic drift=" << iso.ang_mom_drift;
  out.require(iso.ang_mom_drift < 1e-6, "isotropic drift < 1e-6");

  auto g = make_cubic_grid(2, 8.0, 128);
  SimState s{smooth_datum(g), params2d(3.0, 0.3, 1.0, 1.5), 0.0, 0};
  EvolveOptions o;
  o.horizon = 2.0;
  o.dt = 1e-3;
  o.sample_every = 100;
  auto tr = evolve(s, o);
  const double dl = tr.rows.back().f.ang_mom - tr.rows.front().f.ang_mom;
  const double err = rel(tr.ang_mom_rate_integral, dl);
  out.detail << " anisotropic dl=" << dl << " quadrature=" << tr.ang_mom_rate_integral
             << " rel=" << err;
  out.require(err < 1e-4, "anisotropic rate quadrature within 1e-4");
}

void virial(Outcome& out) {
  auto g = make_cubic_grid(2, 8.0, 128);
  auto u = ComplexField::sample(g, [](const Point& x) {
    return cplx{1.2 + 0.3 * x[0], 0.2 * x[1]} * std::exp(-0.5 * (1.3 * x[0] * x[0] + x[1] * x[1]));
  });
  SimState s{u, params2d(3.0, 0.3), 0.0, 0};
  EvolveOptions o;
  o.horizon = 1.0;
  o.dt = 1e-3;
  o.sample_every = 10;
  auto tr = evolve(s, o);
  const double h = 1e-2;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < tr.rows.size(); ++i) {
    const double fd = (tr.rows[i + 1].J - 2.0 * tr.rows[i].J + tr.rows[i - 1].J) / (h * h);
    worst = std::max(worst, rel(fd, tr.rows[i].Jpp_vfm));
  }
  out.detail << "max rel(fd, Jpp_vfm)=" << worst;
  out.require(worst < 1e-3, "finite-difference virial within 1e-3");

  auto gs = minimize_nehari(1.0, params2d(3.0, 0.3), make_cubic_grid(2, 6.0, 128));
  const double jpp = diagnostics(gs.field, gs.params, 0.0, 0.0).Jpp_vfm;
  out.detail << " standing wave Jpp_vfm=" << jpp;
  out.require(std::abs(jpp) < 1e-5, "standing-wave Jpp_vfm = 0 +- 1e-5");
}

void q_certification(Outcome& out) {
  for (auto [n, p] : {std::pair{2, 5.0}, std::pair{2, 3.0}, std::pair{3, 3.0}}) {
    const QProfile q = solve_q(n, p, 1e-10);
    out.detail << "(N=" << n << ",p=" << p << ") grad=" << q.pohozaev_grad_residual
               << " energy=" << q.pohozaev_energy_residual << "; ";
    out.require(q.pohozaev_grad_residual < 1e-6 && q.pohozaev_energy_residual < 1e-6,
                "Pohozaev identities at 1e-6");
  }
  const QProfile q = solve_q(2, 5.0, 1e-10);
  auto pp = params2d(5.0);
  const double sharp = gn_ratio(to_complex(sample_q(q, make_cubic_grid(2, 10.0, 512))), pp) / q.c_gn;
  out.detail << "GN(Q)/c_GN=" << sharp;
  out.require(std::abs(sharp - 1.0) < 1e-6, "GN sharp at Q");
  auto g = make_cubic_grid(2, 6.0, 64);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed)
    worst = std::max(worst, gn_ratio(random_smooth(g, seed), pp) / q.c_gn);
  out.detail << " max random ratio=" << worst;
  out.require(worst <= 1.0, "GN inequality on 100 random fields");
}

void lambda0_oracle(Outcome& out) {
  auto g = make_cubic_grid(2, 8.0, 64);
  for (double w : {0.0, 0.3, 0.6}) {
    const double l = lowest_eigenpair(g, params2d(3.0, w)).lambda0;
    out.detail << "iso(|Omega|=" << w << ")=" << l << " ";
    out.require(std::abs(l + 2.0) < 1e-6, "isotropic 2D lambda0 = -2");
  }
  const double an = lowest_eigenpair(g, params2d(3.0, 0.0, 1.0, 2.0)).lambda0;
  out.detail << "aniso(1,2)=" << an << " ";
  out.require(std::abs(an + 3.0) < 1e-6, "anisotropic lambda0 = -3");
  PhysicsParams p3;
  p3.dim = 3;
  p3.p = 3.0;
  p3.omega_rot = 0.4;
  const double l3 = lowest_eigenpair(make_cubic_grid(3, 7.0, 32), p3).lambda0;
  out.detail << "3D=" << l3;
  out.require(std::abs(l3 + 3.0) < 1e-6, "3D lambda0 = -3");
}

void ground_states(Outcome& out) {
  const GroundState& gs = supercritical_state();
  out.detail << "nehari: residual=" << gs.residual << " I_rel=" << gs.nehari_residual
             << " d=" << gs.d_omega;
  out.require(gs.residual < 1e-6, "stationary residual < 1e-6");
  out.require(gs.nehari_residual < 1e-10, "I_omega = 0 within 1e-10");
  out.require(gs.d_omega > 0.0, "d(omega) > 0");

  auto g = make_cubic_grid(2, 8.0, 64);
  auto pp = params2d(5.0, 0.2);
  const QProfile q = solve_q(2, 5.0, 1e-10);
  const double mu0 = lowest_eigenpair(g, pp).mu0;
  double prev = INFINITY;
  out.detail << "; local omega-lambda0:";
  for (double frac : {0.1, 0.05, 0.025}) {
    const double mass = frac / mu0;
    auto lm = minimize_local(make_local_spec(mass, 1.0, pp, q.c_gn), pp, g);
    const double gap = lm.omega - lm.lambda0;
    out.detail << " " << gap;
    out.require(lm.converged && lm.relative_residual < 1e-6, "local minimizer converged");
    out.require(gap > 0.0, "lambda0 < omega");
    out.require(gap < prev, "omega - lambda0 decreasing with q");
    out.require(lm.energy < -0.5 * lm.lambda0 * mass, "E < -lambda0 q / 2");
    prev = gap;
  }
}

void certification(Outcome& out) {
  const auto c = certify(supercritical_state());
  out.detail << "ew1=" << c.ew1_residual << " sni_slack=" << c.sni_slack
             << " ew2_slack=" << c.ew2_slack;
  out.require(c.ew1_residual < 1e-5, "rescaled Pohozaev residual < 1e-5");
  out.require(c.sni_slack >= -1e-8, "SnI slack");
  out.require(c.ew2_slack >= -1e-8, "Ew2 slack");
}

void classification(Outcome& out) {
  auto g = make_cubic_grid(2, 6.0, 256);
  auto pp = params2d(5.0, 0.2);
  const QProfile q = solve_q(2, 5.0, 1e-10);
  MonitorOptions mon;
  mon.growth_factor = 4.0;

  {
    auto u = gaussian(g, 0.6, 1.0);
    auto r = classify(u, pp, q, estimate_l_isotropic(u, pp));
    out.detail << "(a) " << to_string(r.verdict);
    out.require(r.verdict == Verdict::K_plus, "K_plus datum classified");
    SimState s{u, pp, 0.0, 0};
    EvolveOptions o;
    o.horizon = 20.0;
    o.dt = 1e-3;
    o.sample_every = 20;
    o.monitor = mon;
    double worst = 0.0;
    o.on_sample = [&](const SimState&, const DiagnosticsRow& row) {
      worst = std::max(worst, trap_grad_product(row, r.s_c) / r.grad_threshold);
    };
    auto tr = evolve(s, o);
    out.detail << " " << to_string(tr.termination) << " max grad/threshold=" << worst;
    out.require(tr.termination == Termination::horizon_reached, "K_plus reaches T=20");
    out.require(worst < 1.0, "grad_product below threshold");
  }

  auto collapse = [&](double amp, Verdict expect, const char* tag) {
    auto u = gaussian(g, amp, 0.5);
    auto r = classify(u, pp, q, estimate_l_isotropic(u, pp));
    out.detail << "; " << tag << " E=" << r.energy << " " << to_string(r.verdict);
    out.require(r.verdict == expect, std::string(tag) + " verdict");
    SimState s{u, pp, 0.0, 0};
    EvolveOptions o;
    o.horizon = 1.0;
    o.dt = 1e-4;
    o.sample_every = 5;
    o.monitor = mon;
    auto tr = evolve(s, o);
    out.detail << " " << to_string(tr.termination) << " at t=" << s.t;
    out.require(tr.termination == Termination::blowup_detected, std::string(tag) + " blowup_detected");
    return std::pair{r, tr};
  };
  collapse(2.05, Verdict::K_minus, "(b)");
  auto [r, tr] = collapse(2.3, Verdict::negative_energy_blowup, "(c)");
  if (r.verdict == Verdict::negative_energy_blowup) {
    auto series = check_gradient_lowerbound(tr, r);
    out.detail << " prefactor=" << r.lower_bound_prefactor << " bound=" << series.bound
               << " valid samples=" << series.valid_samples;
    out.require(std::abs(r.lower_bound_prefactor - std::sqrt(2.0)) < 1e-12, "sqrt(2) prefactor");
    out.require(series.valid_samples > 0 && series.all_valid_pass, "gradient lower bound");
  }
}

void stability(Outcome& out) {
  auto pp = params2d(5.0, 0.2);
  auto g = make_cubic_grid(2, 8.0, 64);
  const QProfile q = solve_q(2, 5.0, 1e-10);
  const double mu0 = lowest_eigenpair(g, pp).mu0;
  auto local = minimize_local(make_local_spec(0.05 / mu0, 1.0, pp, q.c_gn), pp, g);
  StabilityOptions so;
  so.sample_every = 50;
  auto rs = stability_experiment(local, {1e-2, 3e-3, 1e-3}, 5.0, so);
  out.detail << "local ratios:";
  for (const auto& r : rs.runs) out.detail << " " << r.ratio;
  out.require(rs.stability_evidence, "sup-distance linear in delta");

  auto gs = minimize_nehari(1.0, pp, make_cubic_grid(2, 6.0, 128));
  StabilityOptions sc;
  sc.kind = PerturbationKind::scaling;
  sc.dt = 5e-4;
  sc.sample_every = 50;
  auto rep = stability_experiment(gs, {1e-2, 1e-3}, 5.0, sc);
  out.detail << "; scaling: indicator=" << rep.indicator;
  for (const auto& r : rep.runs) {
    out.detail << " sup/delta=" << r.ratio;
    out.require(r.sup_distance > 10.0 * r.delta, "scaling sup-distance > 10 delta");
  }
  out.require(rep.indicator < 0.0, "indicator negative");

  const GroundState& fine = supercritical_state();
  const double ind = instability_indicator(fine);
  const double fd = scaling_second_derivative(fine.field, fine.params);
  out.detail << "; indicator=" << ind << " fd=" << fd;
  out.require(rel(fd, ind) < 1e-4, "indicator vs finite difference");
}

void ls1(Outcome& out) {
  const QProfile q = solve_q(2, 5.0, 1e-10);
  const double eta = 0.1 * q.lp1;
  auto pts = ls1_trend(params2d(5.0, 0.05), {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}, 6.0, 128);
  out.detail << "eta=" << eta << " values:";
  double prev = INFINITY;
  bool below = false;
  for (const auto& pt : pts) {
    out.detail << " " << pt.quantity;
    out.require(pt.converged, "ground state converged");
    out.require(pt.quantity < prev, "strictly decreasing");
    below = below || pt.quantity < eta;
    prev = pt.quantity;
  }
  out.require(below, "falls below eta");
}

void splitting_order(Outcome& out) {
  auto g = make_cubic_grid(2, 8.0, 128);
  auto pp = params2d(3.0, 0.3);
  auto u0 = smooth_datum(g);
  auto run = [&](double dt) {
    SimState s{u0, pp, 0.0, 0};
    EvolveOptions o;
    o.horizon = 1.0;
    o.dt = dt;
    o.sample_every = 1 << 30;
    evolve(s, o);
    return s.field;
  };
  const auto ref = run(1e-4);
  std::vector<double> err;
  for (double dt : {0.04, 0.02, 0.01}) err.push_back(std::sqrt(l2_norm_squared(run(dt) - ref)));
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    const double order = std::log2(err[i] / err[i + 1]);
    out.detail << "order=" << order << " ";
    out.require(order >= 1.8 && order <= 2.2, "order in [1.8, 2.2]");
  }
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "conservation of mass and energy", conservation},
      {2, "angular momentum", angular_momentum},
      {3, "virial identity", virial},
      {4, "Q certification", q_certification},
      {5, "lambda0 oracle", lambda0_oracle},
      {6, "ground states", ground_states},
      {7, "rescaling certification", certification},
      {8, "classification end-to-end", classification},
      {9, "stability and instability", stability},
      {10, "rescaled potential trend", ls1},
      {11, "splitting order", splitting_order},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %2d (%s, %.1fs): %s\n", out.pass ? "PASS" : "FAIL", c.id, c.title,
                secs, out.detail.str().c_str());
    std::fflush(stdout);
    failed += !out.pass;
  }
  return failed == 0 ? 0 : 1;
}
