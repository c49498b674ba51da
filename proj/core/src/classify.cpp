#include "rnls/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rnls {

std::string to_string(LMode m) {
  switch (m) {
    case LMode::isotropic_exact: return "isotropic_exact";
    case LMode::trajectory_min: return "trajectory_min";
    case LMode::smalldata_bound: return "smalldata_bound";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::K_plus: return "K_plus";
    case Verdict::K_minus: return "K_minus";
    case Verdict::negative_energy_blowup: return "negative_energy_blowup";
    case Verdict::unclassified: return "unclassified";
  }
  return "unknown";
}

LEstimate estimate_l_isotropic(const ComplexField& u0, const PhysicsParams& params) {
  if (!params.isotropic())
    throw std::invalid_argument("estimate_l: isotropic_exact mode needs equal trap frequencies");
  const double l = evaluate(u0, params).ang_mom;
  return {l, l, LMode::isotropic_exact, 0.0, false, true};
}

LEstimate estimate_l(const Trajectory& trajectory) {
  if (trajectory.rows.empty()) throw std::invalid_argument("estimate_l: empty trajectory");
  LEstimate e;
  e.mode = LMode::trajectory_min;
  e.l = trajectory.rows.back().l_running_min;
  for (const auto& r : trajectory.rows) e.l = std::min(e.l, r.f.ang_mom);
  e.l_upper = e.l;
  e.trajectory_conditional = true;
  double dt = 0.0;
  for (std::size_t i = 1; i < trajectory.rows.size(); ++i)
    dt = std::max(dt, trajectory.rows[i].t - trajectory.rows[i - 1].t);
  e.sampling_interval = dt;
  return e;
}

LEstimate estimate_l_smalldata(const ComplexField& u0, const PhysicsParams& params,
                               const QProfile& q) {
  const FunctionalReport f = evaluate(u0, params);
  const double gamma = params.gamma_min();
  const double ratio = params.omega_rot / gamma;
  LEstimate e;
  e.mode = LMode::smalldata_bound;
  e.l_upper = f.ang_mom;
  e.certified = false;
  e.l = -std::numeric_limits<double>::infinity();
  if (ratio >= 1.0) return e;

  // |l| <= (ratio/2) X by the weighted Young inequality, so 2E >= g(X).
  const double theta = 1.0 - ratio;
  const double alpha = params.dim * (params.p - 1.0) / 4.0;
  const double b = 4.0 * q.c_gn / (params.p + 1.0) *
                   std::pow(std::sqrt(f.mass), params.p + 1.0 - 2.0 * alpha);
  const double x_star = std::pow(theta / (alpha * b), 1.0 / (alpha - 1.0));
  const double g_star = theta * x_star - b * std::pow(x_star, alpha);
  const double x0 = f.kinetic + f.potential;
  if (x0 < x_star && 2.0 * f.energy < g_star) {
    e.certified = true;
    e.l = -0.5 * ratio * x_star;
  }
  return e;
}

ClassificationReport classify(const ComplexField& u0, const PhysicsParams& params,
                              const QProfile& q, const LEstimate& l) {
  const double sc = params.s_c();
  if (!(sc > 0.0 && sc < 1.0)) throw std::invalid_argument("classify: s_c must lie in (0, 1)");
  if (!std::isfinite(l.l) || !std::isfinite(l.l_upper))
    throw std::invalid_argument("classify: l must be finite");
  if (q.dim != params.dim || std::abs(q.p - params.p) > 1e-12)
    throw std::invalid_argument("classify: Q profile does not match (N, p)");

  const FunctionalReport f = evaluate(u0, params);
  const Thresholds th = thresholds(q, f.mass);
  ClassificationReport r;
  r.s_c = sc;
  r.l = l;
  r.energy = f.energy;
  r.mass = f.mass;
  r.me_threshold = th.me_threshold;
  r.grad_threshold = th.grad_threshold;
  r.grad_product = std::pow(std::sqrt(f.kinetic), sc) * std::pow(std::sqrt(f.mass), 1.0 - sc);
  r.lower_bound_prefactor = th.lower_bound_prefactor;
  r.lower_bound_constant = th.x_r / std::pow(std::sqrt(f.mass), (1.0 - sc) / sc);

  // E >= l must hold for every admissible l, the product uses the smallest.
  const bool above = f.energy >= l.l_upper;
  const double gap = f.energy - l.l;
  r.me_product = gap >= 0.0 ? std::pow(gap, sc) * std::pow(f.mass, 1.0 - sc)
                            : -std::numeric_limits<double>::infinity();
  if (f.energy < l.l && l.mode != LMode::smalldata_bound) {
    r.verdict = Verdict::negative_energy_blowup;
  } else if (above && r.me_product < r.me_threshold) {
    if (r.grad_product < r.grad_threshold) r.verdict = Verdict::K_plus;
    else if (r.grad_product > r.grad_threshold) r.verdict = Verdict::K_minus;
  }
  return r;
}

GradientBoundSeries check_gradient_lowerbound(const Trajectory& trajectory,
                                              const ClassificationReport& report,
                                              double tail_threshold) {
  if (report.verdict != Verdict::negative_energy_blowup)
    throw std::invalid_argument("check_gradient_lowerbound: verdict must be negative_energy_blowup");
  GradientBoundSeries s;
  s.bound = report.lower_bound_constant;
  bool lost = false;
  for (const auto& row : trajectory.rows) {
    lost = lost || row.tail_fraction > tail_threshold;
    const bool ok = row.grad_norm >= s.bound;
    s.t.push_back(row.t);
    s.grad_norm.push_back(row.grad_norm);
    s.valid.push_back(!lost);
    s.pass.push_back(ok);
    if (!lost) {
      ++s.valid_samples;
      s.all_valid_pass = s.all_valid_pass && ok;
    }
  }
  return s;
}

}  // namespace rnls
