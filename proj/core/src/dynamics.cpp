#include "rnls/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "rnls/spectral.hpp"

namespace rnls {

namespace {

double nonlinear_power(double m2, double p) {
  const double e = 0.5 * (p - 1.0);
  if (e == 1.0) return m2;
  if (e == 2.0) return m2 * m2;
  return std::pow(m2, e);
}

// Rotation part of the symbol drops the Nyquist mode, as the spectral
// derivative does.
double rotation_wavenumber(const Grid& g, int axis, std::size_t m) {
  return m == g.points[axis] / 2 ? 0.0 : g.wavenumbers[axis][m];
}

double relative_change(double now, double ref) {
  const double scale = std::abs(ref) > 0.0 ? std::abs(ref) : 1.0;
  return std::abs(now - ref) / scale;
}

}  // namespace

SplitStepPropagator::SplitStepPropagator(GridPtr grid, PhysicsParams params, double dt,
                                         bool nonlinear)
    : grid_(std::move(grid)),
      params_(params),
      dt_(dt),
      nonlinear_(nonlinear),
      half_v_(grid_),
      phase_a_(grid_),
      phase_b_(grid_) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be nonzero");
  if (params_.dim != grid_->dim) throw std::invalid_argument("step: grid/params dimension mismatch");
  const Grid& g = *grid_;
  const double c = params_.rotation_coefficient();
  for_each_point(g, [&](std::size_t i, const Point& x) { half_v_[i] = 0.5 * potential_at(params_, x); });

  std::size_t idx = 0;
  for (std::size_t i = 0; i < g.points[0]; ++i) {
    const double k1 = g.wavenumbers[0][i];
    const double r1 = rotation_wavenumber(g, 0, i);
    const double x1 = g.coordinate(0, i);
    for (std::size_t j = 0; j < g.points[1]; ++j) {
      const double k2 = g.wavenumbers[1][j];
      const double r2 = rotation_wavenumber(g, 1, j);
      const double x2 = g.coordinate(1, j);
      for (std::size_t l = 0; l < g.points[2]; ++l, ++idx) {
        const double k3 = g.dim == 3 ? g.wavenumbers[2][l] : 0.0;
        const double ha = 0.5 * k1 * k1 - c * x2 * r1;
        const double hb = 0.5 * (k2 * k2 + k3 * k3) + c * x1 * r2;
        phase_a_[idx] = std::polar(1.0, -dt * ha);
        phase_b_[idx] = std::polar(1.0, -0.5 * dt * hb);
      }
    }
  }
}

void SplitStepPropagator::apply_n(ComplexField& u, double tau) const {
  const double p = params_.p;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double h = half_v_[i];
    if (nonlinear_) h -= nonlinear_power(std::norm(u[i]), p);
    u[i] *= std::polar(1.0, -tau * h);
  }
}

double SplitStepPropagator::phase_increment(const ComplexField& u) const {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double h = half_v_[i];
    if (nonlinear_) h -= nonlinear_power(std::norm(u[i]), params_.p);
    m = std::max(m, std::abs(h));
  }
  return std::abs(dt_) * m;
}

void SplitStepPropagator::step(ComplexField& u) const {
  const Grid& g = *grid_;
  auto data = u.values();
  auto apply_b = [&] {
    for (int a = 1; a < g.dim; ++a) spectral::forward_axis(data, g, a);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= phase_b_[i];
    for (int a = 1; a < g.dim; ++a) spectral::inverse_axis(data, g, a);
  };
  apply_n(u, 0.5 * dt_);
  apply_b();
  spectral::forward_axis(data, g, 0);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= phase_a_[i];
  spectral::inverse_axis(data, g, 0);
  apply_b();
  apply_n(u, 0.5 * dt_);
}

SimState step(const SimState& state, double dt, bool nonlinear) {
  SplitStepPropagator prop(state.field.grid_ptr(), state.params, dt, nonlinear);
  SimState out = state;
  prop.step(out.field);
  if (!out.field.is_finite()) throw NonFiniteStateError("step produced a non-finite field", state);
  out.t += dt;
  ++out.step_count;
  return out;
}

MonitorBaseline make_baseline(const ComplexField& u0, const PhysicsParams& params) {
  const FunctionalReport f = evaluate(u0, params);
  return {std::sqrt(f.kinetic), f.ang_mom};
}

MonitorReport blowup_monitor(const DiagnosticsRow& row, const MonitorBaseline& baseline,
                             const MonitorOptions& options) {
  MonitorReport r;
  r.grad_ratio = baseline.grad0 > 0.0 ? row.grad_norm / baseline.grad0
                                      : std::numeric_limits<double>::infinity();
  r.tail_fraction = row.tail_fraction;
  r.l_running_min = std::min(baseline.l_running_min, row.l_running_min);
  const bool tail = r.tail_fraction > options.tail_threshold;
  r.blowup = tail && r.grad_ratio > options.growth_factor;
  r.resolution_lost = tail && !r.blowup;
  return r;
}

MonitorReport blowup_monitor(const SimState& state, const MonitorBaseline& baseline,
                             const MonitorOptions& options) {
  return blowup_monitor(diagnostics(state.field, state.params, state.t, baseline.l_running_min),
                        baseline, options);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::horizon_reached: return "horizon_reached";
    case Termination::blowup_detected: return "blowup_detected";
    case Termination::resolution_lost: return "resolution_lost";
  }
  return "unknown";
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(rows.size());
  for (const auto& r : rows) t.push_back(r.t);
  return t;
}

Trajectory evolve(SimState& state, const EvolveOptions& options) {
  if (!(options.horizon > 0.0)) throw std::invalid_argument("evolve: horizon must be positive");
  if (options.dt == 0.0 || !std::isfinite(options.dt))
    throw std::invalid_argument("evolve: dt must be nonzero");
  if (options.sample_every < 1) throw std::invalid_argument("evolve: sample_every must be >= 1");
  if (!state.field.is_finite()) throw std::invalid_argument("evolve: initial field is not finite");

  Trajectory traj;
  traj.dt_initial = options.dt;
  const double direction = options.dt > 0.0 ? 1.0 : -1.0;
  const double t0 = state.t;
  const double t_end = t0 + direction * options.horizon;

  const MonitorBaseline baseline = make_baseline(state.field, state.params);
  DiagnosticsRow row0 = diagnostics(state.field, state.params, state.t,
                                    std::numeric_limits<double>::infinity());
  traj.rows.push_back(row0);
  if (options.on_sample) options.on_sample(state, row0);
  double l_min = row0.l_running_min;

  const bool track_rate = state.params.rotation_coefficient() != 0.0 &&
                          state.params.gammas[0] != state.params.gammas[1];
  double rate_prev = track_rate ? angular_momentum_rate(state.field, state.params) : 0.0;

  double dt = options.dt;
  auto prop = std::make_unique<SplitStepPropagator>(state.field.grid_ptr(), state.params, dt,
                                                    options.nonlinear);
  double grad_at_shrink = row0.grad_norm;
  SimState last_good = state;
  int since_sample = 0;

  while (direction * (t_end - state.t) > 1e-12 * options.horizon) {
    // The final step lands exactly on the horizon.
    const double remaining = t_end - state.t;
    const bool last = std::abs(remaining) < std::abs(dt) * (1.0 + 1e-9);
    if (last && std::abs(remaining - dt) > 1e-14 * options.horizon) {
      prop = std::make_unique<SplitStepPropagator>(state.field.grid_ptr(), state.params,
                                                   remaining, options.nonlinear);
    }
    const double h = last ? remaining : dt;
    traj.max_phase_increment = std::max(traj.max_phase_increment, prop->phase_increment(state.field));
    prop->step(state.field);
    state.t = last ? t_end : state.t + h;
    ++state.step_count;
    ++traj.steps;
    if (track_rate) {
      const double rate = angular_momentum_rate(state.field, state.params);
      traj.ang_mom_rate_integral += 0.5 * h * (rate_prev + rate);
      rate_prev = rate;
    }

    if (++since_sample < options.sample_every && !last) continue;
    since_sample = 0;
    if (!state.field.is_finite())
      throw NonFiniteStateError("evolve: non-finite field at t=" + std::to_string(state.t), last_good);

    DiagnosticsRow row = diagnostics(state.field, state.params, state.t, l_min);
    l_min = row.l_running_min;
    traj.rows.push_back(row);
    traj.mass_drift = std::max(traj.mass_drift, relative_change(row.f.mass, row0.f.mass));
    traj.energy_drift = std::max(traj.energy_drift, relative_change(row.f.energy, row0.f.energy));
    traj.ang_mom_drift = std::max(traj.ang_mom_drift, relative_change(row.f.ang_mom, row0.f.ang_mom));
    if (options.on_sample) options.on_sample(state, row);
    last_good = state;

    if (options.monitor_enabled) {
      traj.last_monitor = blowup_monitor(row, baseline, options.monitor);
      if (traj.last_monitor.blowup) {
        traj.termination = Termination::blowup_detected;
        break;
      }
      if (traj.last_monitor.resolution_lost) {
        traj.termination = Termination::resolution_lost;
        break;
      }
    }
    if (options.dt_shrink && row.grad_norm > 2.0 * grad_at_shrink &&
        std::abs(dt) > options.dt_min) {
      dt *= 0.5;
      grad_at_shrink = row.grad_norm;
      prop = std::make_unique<SplitStepPropagator>(state.field.grid_ptr(), state.params, dt,
                                                   options.nonlinear);
    }
    if (last) break;
  }
  traj.dt_final = dt;
  return traj;
}

}  // namespace rnls
