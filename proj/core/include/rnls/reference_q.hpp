#pragma once

#include <cmath>
#include <filesystem>
#include <vector>

#include "rnls/field.hpp"

namespace rnls {

/// Positive radial solution of -1/2 Lap Q + Q - Q^p = 0 with certified norms.
struct QProfile {
  int dim = 2;
  double p = 3.0;
  double tol = 1e-10;
  double q0 = 0.0;  // Q(0)
  // Uniform radial samples on [0, r_max] with derivatives.
  double dr = 0.0;
  std::vector<double> r, q, dq;
  // Q(r) = tail_coefficient * r^{-nu} K_nu(sqrt(2) r), nu = (N-2)/2, for r >= r_match.
  double r_match = 0.0;
  double r_max = 0.0;
  double tail_coefficient = 0.0;

  double mass = 0.0;  // ||Q||^2
  double grad = 0.0;  // ||grad Q||^2
  double lp1 = 0.0;   // ||Q||_{p+1}^{p+1}
  double e00 = 0.0;   // 1/2 ||grad Q||^2 - 2/(p+1) ||Q||_{p+1}^{p+1}
  double c_gn = 0.0;

  // Relative residuals of the two Pohozaev consistency identities.
  double pohozaev_grad_residual = 0.0;
  double pohozaev_energy_residual = 0.0;
  bool certified = false;

  double s_c() const {
    const double s = 0.5 * dim - 2.0 / (p - 1.0);
    return std::abs(s) < 1e-12 ? 0.0 : s;
  }
  /// Q at radius r (cubic Hermite inside, asymptotic tail outside).
  double value(double radius) const;
};

/// Throws std::invalid_argument for out-of-range (N, p), std::runtime_error
/// when shooting does not isolate the decaying solution.
QProfile solve_q(int dim, double p, double tol = 1e-10);

/// Closed-form sharp constant from ||Q||; throws if it disagrees with the
/// Gagliardo-Nirenberg ratio of Q by more than 1e-6.
double gn_constant(const QProfile& q);

/// ratio ||Q||_{p+1}^{p+1} / (||grad Q||^{N(p-1)/2} ||Q||^{p+1-N(p-1)/2}) from the radial norms.
double radial_gn_ratio(const QProfile& q);

/// Samples Q(|x|) on a grid.
RealField sample_q(const QProfile& q, const GridPtr& grid);

struct Thresholds {
  double s_c = 0.0;
  double x1 = 0.0;     // data dependent, from u0_mass
  double x_max = 0.0;  // ||grad Q|| ||Q||^{(1-s_c)/s_c}
  double x_r = 0.0;    // root of h
  double me_threshold = 0.0;    // E00^{s_c} M(Q)^{1-s_c}
  double grad_threshold = 0.0;  // ||grad Q||^{s_c} ||Q||^{1-s_c}
  /// ((p-1)N/4)^{1/(s_c(p-1))}
  double lower_bound_prefactor = 0.0;
};

/// u0_mass is ||u0||_2^2. Throws std::invalid_argument unless 0 < s_c.
Thresholds thresholds(const QProfile& q, double u0_mass);

/// f(x) = x^2/2 - beta x^{N(p-1)/2} with beta = 2 c_GN/(p+1) ||u0||^{p+1-N(p-1)/2}.
double threshold_f(const QProfile& q, double u0_mass, double x);
/// h(x) = x^2/2 - 2 c_GN/(p+1) x^{N(p-1)/2}.
double threshold_h(const QProfile& q, double x);

/// Returns a cached profile from `cache_dir` if present, otherwise solves and
/// stores it. `hit` reports which path was taken.
QProfile load_or_solve_q(int dim, double p, double tol, const std::filesystem::path& cache_dir,
                         bool* hit = nullptr);
std::filesystem::path q_cache_name(int dim, double p, double tol);

}  // namespace rnls
