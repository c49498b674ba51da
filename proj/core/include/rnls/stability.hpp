#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnls/dynamics.hpp"
#include "rnls/groundstate.hpp"

namespace rnls {

/// min over theta of ||u - e^{i theta} phi||_Sigma, with theta = arg <phi, u>.
double phase_aligned_sigma_distance(const ComplexField& u, const ComplexField& phi);

/// Smooth seeded random field, polynomial times a Gaussian matched to the
/// second moment of `phi`, normalized to ||.||_Sigma = 1.
ComplexField random_sigma_direction(const ComplexField& phi, std::uint64_t seed);

enum class PerturbationKind { random, scaling };
std::string to_string(PerturbationKind k);

struct StabilityOptions {
  PerturbationKind kind = PerturbationKind::random;
  std::uint64_t seed = 1;
  /// Scaling direction uses (1 + sign*delta).
  int scaling_sign = 1;
  double dt = 1e-3;
  int sample_every = 20;
  /// Instability evidence needs every sup-distance above this.
  double epsilon_factor = 10.0;
  /// Stability evidence needs max(ratio)/min(ratio) below this.
  double linear_spread = 3.0;
};

struct StabilityRun {
  double delta = 0.0;
  double initial_distance = 0.0;
  double sup_distance = 0.0;
  double ratio = 0.0;  // sup_distance / delta
  Termination termination = Termination::horizon_reached;
  double time_of_sup = 0.0;
};

struct StabilityReport {
  PerturbationKind kind = PerturbationKind::random;
  double horizon = 0.0;
  double indicator = 0.0;
  std::vector<StabilityRun> runs;
  /// sup-distance / delta bounded across the sweep, every run completed.
  bool stability_evidence = false;
  /// every run exceeded epsilon_factor * delta, or blew up.
  bool instability_evidence = false;
  double ratio_spread = 0.0;
};

/// deltas must be nonnegative and strictly decreasing; delta = 0 is the
/// unperturbed control. Blow-up inside a run is recorded, never thrown.
StabilityReport stability_experiment(const GroundState& gs, const std::vector<double>& deltas,
                                     double horizon, const StabilityOptions& options = {});

}  // namespace rnls
