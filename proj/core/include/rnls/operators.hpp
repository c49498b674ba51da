#pragma once

#include "rnls/field.hpp"
#include "rnls/params.hpp"

namespace rnls {

struct CgReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// The Hermitian operator R = -Lap + V + 2L on a fixed grid, with matrix-free
/// application and a preconditioned conjugate gradient solver for R + s.
class QuadraticOperator {
 public:
  QuadraticOperator(GridPtr grid, const PhysicsParams& params);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const PhysicsParams& params() const { return params_; }
  const RealField& potential() const { return potential_; }

  /// (R + shift + W) u, with W an optional real multiplication potential.
  ComplexField apply(const ComplexField& u, double shift = 0.0,
                     const RealField* extra = nullptr) const;

  /// <R u, u>, which equals the quadratic form of the state.
  double form(const ComplexField& u) const;

  /// Solves (R + shift) x = b with x as the initial guess. shift must make
  /// the operator positive definite (shift > lambda0).
  CgReport solve(const ComplexField& b, double shift, ComplexField& x, double rtol,
                 int max_iterations = 500, const RealField* extra = nullptr) const;

 private:
  ComplexField precondition(const ComplexField& r, double shift) const;

  GridPtr grid_;
  PhysicsParams params_;
  RealField potential_;
  std::vector<double> k2_;
};

/// || R phi + omega phi - 2|phi|^{p-1} phi ||_2.
double stationary_residual(const QuadraticOperator& op, const ComplexField& phi, double omega);

/// 2 |u|^{p-1} u pointwise.
ComplexField nonlinear_term(const ComplexField& u, double p);

}  // namespace rnls
