#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnls/diagnostics.hpp"
#include "rnls/field.hpp"
#include "rnls/params.hpp"

namespace rnls {

struct SimState {
  ComplexField field;
  PhysicsParams params;
  double t = 0.0;
  std::int64_t step_count = 0;
};

/// Thrown when a step produces NaN/inf; carries the last finite state seen.
class NonFiniteStateError : public std::runtime_error {
 public:
  NonFiniteStateError(const std::string& what, SimState last_good)
      : std::runtime_error(what), last_good_(std::move(last_good)) {}
  const SimState& last_good() const { return last_good_; }

 private:
  SimState last_good_;
};

/// Strang splitting N(dt/2) B(dt/2) A(dt) B(dt/2) N(dt/2) with the rotation
/// term split by direction: A holds -1/2 d11 and the x2 d1 part of L (diagonal
/// in (xi1, x2, x3)), B holds -1/2 d22 (-1/2 d33) and the x1 d2 part. N is the
/// pointwise flow of 1/2 V - |u|^{p-1}, exact since |u| is invariant.
class SplitStepPropagator {
 public:
  /// dt may be negative (backward evolution).
  SplitStepPropagator(GridPtr grid, PhysicsParams params, double dt, bool nonlinear = true);

  void step(ComplexField& u) const;
  double dt() const { return dt_; }
  /// |dt| * max |1/2 V - |u|^{p-1}|, the per-step phase of the N substep.
  double phase_increment(const ComplexField& u) const;

 private:
  void apply_n(ComplexField& u, double tau) const;

  GridPtr grid_;
  PhysicsParams params_;
  double dt_;
  bool nonlinear_;
  RealField half_v_;
  ComplexField phase_a_;  // full dt, indexed (xi1, x2, x3)
  ComplexField phase_b_;  // dt/2, indexed (x1, xi2, xi3)
};

/// One step; builds a propagator each call (evolve caches it instead).
SimState step(const SimState& state, double dt, bool nonlinear = true);

struct MonitorOptions {
  double growth_factor = 50.0;
  double tail_threshold = 0.01;
};

struct MonitorBaseline {
  double grad0 = 0.0;
  double l_running_min = 0.0;
};

struct MonitorReport {
  bool blowup = false;
  bool resolution_lost = false;
  double grad_ratio = 0.0;
  double tail_fraction = 0.0;
  double l_running_min = 0.0;
};

MonitorBaseline make_baseline(const ComplexField& u0, const PhysicsParams& params);
/// Takes the row already computed for the current sample.
MonitorReport blowup_monitor(const DiagnosticsRow& row, const MonitorBaseline& baseline,
                             const MonitorOptions& options = {});
MonitorReport blowup_monitor(const SimState& state, const MonitorBaseline& baseline,
                             const MonitorOptions& options = {});

enum class Termination { horizon_reached, blowup_detected, resolution_lost };
std::string to_string(Termination t);

struct EvolveOptions {
  double horizon = 1.0;
  /// Negative dt integrates backwards for |horizon| time units.
  double dt = 1e-3;
  int sample_every = 10;
  MonitorOptions monitor;
  bool monitor_enabled = true;
  bool nonlinear = true;
  /// Halve dt each time ||grad u|| doubles relative to the last change.
  bool dt_shrink = false;
  double dt_min = 1e-7;
  /// Called after every sample with the current state and its row.
  std::function<void(const SimState&, const DiagnosticsRow&)> on_sample;
};

struct Trajectory {
  std::vector<DiagnosticsRow> rows;
  Termination termination = Termination::horizon_reached;
  double dt_initial = 0.0;
  double dt_final = 0.0;
  std::int64_t steps = 0;
  /// Max over samples of |Q(t) - Q(0)| / |Q(0)|.
  double mass_drift = 0.0;
  double energy_drift = 0.0;
  double ang_mom_drift = 0.0;
  /// Trapezoid-in-time integral of angular_momentum_rate, accumulated per step.
  double ang_mom_rate_integral = 0.0;
  double max_phase_increment = 0.0;
  MonitorReport last_monitor;

  std::vector<double> times() const;
};

/// Advances `state` in place. Throws NonFiniteStateError on NaN/inf.
Trajectory evolve(SimState& state, const EvolveOptions& options);

}  // namespace rnls
