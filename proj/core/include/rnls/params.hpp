#pragma once

#include <array>
#include <string>
#include <vector>

#include "rnls/field.hpp"

namespace rnls {

/// Physical configuration of the rotating trapped NLS
///   i u_t = -1/2 Lap u + 1/2 V u - |u|^{p-1} u + L_Omega u,
/// with V = sum gamma_j^2 x_j^2 and rotation about the x3 axis.
struct PhysicsParams {
  int dim = 2;
  double p = 3.0;
  std::array<double, 3> gammas{1.0, 1.0, 1.0};
  /// |Omega|, the rotation rate about the third coordinate axis.
  double omega_rot = 0.0;
  /// L_Omega = -i * lomega_sign * |Omega| * (x1 d/dx2 - x2 d/dx1).
  /// -1 is the operator -Omega.L with L = -i x^grad; +1 flips it.
  int lomega_sign = -1;

  double gamma_min() const;
  bool isotropic() const;
  /// Signed prefactor c of -i c (x1 d2 - x2 d1).
  double rotation_coefficient() const { return lomega_sign * omega_rot; }

  /// 1 + 4/N.
  double critical_exponent() const;
  /// 2^* = 1 + 4/(N-2) in 3D, +infinity in 2D.
  double sobolev_exponent() const;
  /// s_c = N/2 - 2/(p-1).
  double s_c() const;
  bool mass_supercritical() const;

  /// Human-readable list of violated invariants (empty when valid).
  std::vector<std::string> violations() const;
  /// Throws std::invalid_argument listing the violations.
  void validate() const;
};

/// V(x) = sum_j gamma_j^2 x_j^2.
double potential_at(const PhysicsParams& params, const Point& x);

}  // namespace rnls
