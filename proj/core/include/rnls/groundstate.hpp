#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rnls/field.hpp"
#include "rnls/params.hpp"

namespace rnls {

enum class GroundStateSource { nehari, local };
std::string to_string(GroundStateSource s);

/// A computed solution of R phi + omega phi - 2|phi|^{p-1} phi = 0.
struct GroundState {
  ComplexField field;
  PhysicsParams params;
  GroundStateSource source = GroundStateSource::nehari;
  double omega = 0.0;
  double lambda0 = 0.0;
  // Local problem data (source == local).
  double q = 0.0;
  double r = 0.0;

  double mass = 0.0;
  double quad_form = 0.0;
  double lp1 = 0.0;
  double energy = 0.0;
  double action = 0.0;   // S_omega
  double d_omega = 0.0;  // S_omega at the Nehari minimizer
  double residual = 0.0;           // stationary residual, L2
  double relative_residual = 0.0;  // residual / ||phi||_Sigma
  double nehari_residual = 0.0;    // |I_omega(phi)| / (t[phi] + |omega| M(phi))
  int iterations = 0;
  bool converged = false;
};

struct SolverOptions {
  /// Target for residual / ||phi||_Sigma.
  double tol = 1e-9;
  int max_iterations = 2000;
  std::optional<ComplexField> initial;
  /// Nonzero seeds add a reproducible smooth random perturbation to the start.
  std::uint64_t seed = 0;
  /// Skip the eigenvalue solve when lambda0 is already known.
  std::optional<double> lambda0;
};

/// kappa0 f with kappa0 = ((t[f] + omega M(f)) / (2 ||f||_{p+1}^{p+1}))^{1/(p-1)}.
ComplexField nehari_project(const ComplexField& f, double omega, const PhysicsParams& params);
double nehari_kappa(const ComplexField& f, double omega, const PhysicsParams& params);

/// Minimizes S_omega on the Nehari manifold I_omega = 0.
/// Throws std::invalid_argument on regime violations.
GroundState minimize_nehari(double omega, const PhysicsParams& params, const GridPtr& grid,
                            const SolverOptions& options = {});

struct LocalMinimizationSpec {
  double q = 0.0;
  double r = 0.0;
  double q0_estimate = 0.0;
  double chi = 0.0;
  double delta = 0.0;
  double constant = 0.0;  // C of Gamma_q
};

/// Fills chi, delta, the constant C = 2 c_GN/(p+1) C_H^{N(p-1)/4} and q0.
LocalMinimizationSpec make_local_spec(double q, double r, const PhysicsParams& params, double c_gn);

/// Minimizes E_Omega on {M = q} near the linear ground state, inside the
/// ball t[u] <= r. Throws std::runtime_error if an iterate leaves the ball.
GroundState minimize_local(const LocalMinimizationSpec& spec, const PhysicsParams& params,
                           const GridPtr& grid, const SolverOptions& options = {});

struct GapReport {
  double phi_at_qr2 = 0.0;  // Phi_q(qr/2) = qr/4
  double gamma_inf = 0.0;   // inf over (rq, r) of Gamma_q
  double gap = 0.0;
  double q0 = 0.0;          // largest q with Gamma_q(t) >= t/3 on (0, r)
};

/// Gamma_q(t) = t/2 (1 - 2 C q^chi t^delta) with t = ||u||_H^2.
double gamma_q(const LocalMinimizationSpec& spec, double q, double t);
GapReport wellposedness_gap(const LocalMinimizationSpec& spec, double q_probe);

struct RescaledState {
  ComplexField field;         // phi~ on the grid scaled by sqrt(omega)
  PhysicsParams params;       // gamma/omega, |Omega|/omega
  double omega = 0.0;
  double mass_ratio_error = 0.0;  // relative error of M(phi) = omega^{2/(p-1)-N/2} M(phi~)
  double ratio_lhs = 0.0;         // (int V|phi|^2 + 2 l(phi)) / ||phi||_{p+1}^{p+1}
  double ratio_rhs = 0.0;         // same for phi~ with omega^{-2}, omega^{-1} weights
  double ang_mom_scaling_error = 0.0;
  double residual = 0.0;          // of the unit-frequency equation, relative
};

/// phi(x) = omega^{1/(p-1)} phi~(sqrt(omega) x). With a target grid the result
/// is interpolated onto it (std::domain_error if it cannot hold the field).
RescaledState rescale_to_unit_frequency(const GroundState& gs,
                                        const GridPtr& target = nullptr);

struct Ls1Point {
  double omega = 0.0;
  /// omega^{-2} int V|phi~|^2 + 2 omega^{-1} l(phi~)
  double quantity = 0.0;
  double lp1 = 0.0;  // ||phi~||_{p+1}^{p+1}
  double relative_residual = 0.0;
  bool converged = false;
};

/// Nehari ground states along increasing omega, each on a grid of half-width
/// rescaled_half_width / sqrt(omega) so that phi~ always lives on the same box.
std::vector<Ls1Point> ls1_trend(const PhysicsParams& params, const std::vector<double>& omegas,
                                double rescaled_half_width, std::size_t points,
                                const SolverOptions& options = {});

struct CertificationReport {
  double pohozaev_residual = 0.0;  // |P(phi)| / ||grad phi||^2
  double ew1_residual = 0.0;       // rescaled Pohozaev identity, relative
  double sni_slack = 0.0;          // RHS - LHS, >= 0 when satisfied
  double ew2_slack = 0.0;
  double er1_slack = 0.0;
  double stationary_residual = 0.0;
  double nehari_residual = 0.0;
  bool passed = false;
};

CertificationReport certify(const GroundState& gs, double residual_tol = 1e-5,
                            double slack_tol = 1e-8);

/// 4 int V|phi|^2 - N (p-1)/(p+1) (N(p-1)/2 - 2) ||phi||_{p+1}^{p+1}.
/// Throws std::invalid_argument for p <= 1 + 4/N.
double instability_indicator(const GroundState& gs);

/// Central second difference of s -> E(s^{N/2} phi(s x)) at s = 1, using
/// spectral dilation of the sampled state.
double scaling_second_derivative(const ComplexField& phi, const PhysicsParams& params,
                                 double h = 1e-3);

/// s^{N/2} f(s x) on the grid of f.
ComplexField scaling_dilation(const ComplexField& f, double s);

/// Share of mass carried by angular Fourier modes m != 0 about the origin,
/// measured on polar rings in the (x1, x2) plane.
double nonradial_mass_fraction(const ComplexField& f, std::size_t rings = 96,
                               std::size_t angles = 64);

}  // namespace rnls
