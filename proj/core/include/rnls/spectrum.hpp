#pragma once

#include <optional>
#include <vector>

#include "rnls/field.hpp"
#include "rnls/params.hpp"

namespace rnls {

struct EigenResult {
  double mu0 = 0.0;      // inf <R u, u> / M(u)
  double lambda0 = 0.0;  // -mu0
  ComplexField eigenfield;  // unit mass
  double residual = 0.0;    // ||R phi - mu0 phi||
  int iterations = 0;
  bool converged = false;
  /// Rayleigh quotient after every iteration.
  std::vector<double> history;
};

struct EigenOptions {
  double tol = 1e-10;
  int max_iterations = 2000;
  /// Starting field; defaults to the anisotropic Gaussian matched to gamma.
  std::optional<ComplexField> initial;
};

/// Lower bound (1 - |Omega|/gamma) sum_j gamma_j of the spectrum of R.
double spectral_lower_bound(const PhysicsParams& params);

/// Implicit imaginary-time iteration with L2 renormalization. Throws
/// std::invalid_argument when |Omega| >= gamma; a non-converged run returns
/// the last iterate with converged = false.
EigenResult lowest_eigenpair(const GridPtr& grid, const PhysicsParams& params,
                             const EigenOptions& options = {});

}  // namespace rnls
