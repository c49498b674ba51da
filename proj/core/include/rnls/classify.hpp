#pragma once

#include <string>
#include <vector>

#include "rnls/dynamics.hpp"
#include "rnls/reference_q.hpp"

namespace rnls {

enum class LMode { isotropic_exact, trajectory_min, smalldata_bound };
std::string to_string(LMode m);

/// Estimate of l = inf_t l_Omega(u(t)).
///
/// isotropic_exact: l = l_Omega(u0), conserved by the flow.
/// trajectory_min: running minimum over samples; an upper bound on the true
///   infimum, so verdicts built on it are trajectory-conditional.
/// smalldata_bound: certified interval [l, l_upper] from energy trapping of
///   X = ||grad u||^2 + int V|u|^2 below the maximizer of
///   theta X - B X^{N(p-1)/4}, theta = 1 - |Omega|/gamma.
struct LEstimate {
  double l = 0.0;
  double l_upper = 0.0;
  LMode mode = LMode::isotropic_exact;
  double sampling_interval = 0.0;
  bool trajectory_conditional = false;
  bool certified = true;
};

/// Throws std::invalid_argument when the trap is not isotropic.
LEstimate estimate_l_isotropic(const ComplexField& u0, const PhysicsParams& params);
LEstimate estimate_l(const Trajectory& trajectory);
/// certified == false when u0 is not small enough for the trapping argument.
LEstimate estimate_l_smalldata(const ComplexField& u0, const PhysicsParams& params,
                               const QProfile& q);

enum class Verdict { K_plus, K_minus, negative_energy_blowup, unclassified };
std::string to_string(Verdict v);

struct ClassificationReport {
  double s_c = 0.0;
  LEstimate l;
  double energy = 0.0;
  double mass = 0.0;
  double me_product = 0.0;
  double me_threshold = 0.0;
  double grad_product = 0.0;
  double grad_threshold = 0.0;
  Verdict verdict = Verdict::unclassified;
  /// ((p-1)N/4)^{1/(s_c(p-1))} (||Q||/||u0||)^{(1-s_c)/s_c} ||grad Q||
  double lower_bound_constant = 0.0;
  double lower_bound_prefactor = 0.0;
};

/// Throws std::invalid_argument unless 0 < s_c < 1 and l is finite.
ClassificationReport classify(const ComplexField& u0, const PhysicsParams& params,
                              const QProfile& q, const LEstimate& l);

struct GradientBoundSeries {
  std::vector<double> t;
  std::vector<double> grad_norm;
  std::vector<bool> valid;  // false once the tail threshold is crossed
  std::vector<bool> pass;
  double bound = 0.0;
  bool all_valid_pass = true;
  int valid_samples = 0;
};

/// Throws std::invalid_argument unless verdict == negative_energy_blowup.
GradientBoundSeries check_gradient_lowerbound(const Trajectory& trajectory,
                                              const ClassificationReport& report,
                                              double tail_threshold = 0.01);

}  // namespace rnls
