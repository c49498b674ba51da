#pragma once

#include <iosfwd>
#include <string>

#include "rnls/field.hpp"
#include "rnls/params.hpp"

namespace rnls {

/// Conserved and auxiliary quantities of a state.
struct FunctionalReport {
  double mass = 0.0;
  double kinetic = 0.0;    // ||grad u||^2
  double potential = 0.0;  // int V |u|^2
  double lp1 = 0.0;        // ||u||_{p+1}^{p+1}
  double ang_mom = 0.0;    // Re <L u, u>
  double ang_mom_imag = 0.0;
  double quad_form = 0.0;  // kinetic + potential + 2 ang_mom
  double energy = 0.0;     // quad_form/2 - 2/(p+1) lp1
  double sigma_norm2 = 0.0;
  /// ||u||_H^2, reported as the raw quadratic form.
  double h_norm2() const { return quad_form; }
};

struct StationaryFunctionals {
  double action = 0.0;   // S_omega
  double nehari = 0.0;   // I_omega
  double pohozaev = 0.0; // P
};

RealField potential_field(const GridPtr& grid, const PhysicsParams& params);

/// L u = -i c (x1 d2 u - x2 d1 u), c = lomega_sign * |Omega|.
ComplexField apply_angular_momentum(const ComplexField& f, const PhysicsParams& params);

/// Throws std::runtime_error on a corrupt field or when Im<Lu, u> exceeds
/// 1e-10 ||u||^2.
FunctionalReport evaluate(const ComplexField& f, const PhysicsParams& params);

StationaryFunctionals stationary_functionals(const FunctionalReport& r, const PhysicsParams& params,
                                             double omega);
StationaryFunctionals stationary_functionals(const ComplexField& f, const PhysicsParams& params,
                                             double omega);

/// ||f||_{p+1}^{p+1} / (||grad f||^{N(p-1)/2} ||f||^{p+1-N(p-1)/2}).
double gn_ratio(const ComplexField& f, const PhysicsParams& params);

/// (|Omega|^2/(2a)) ||x f||^2 + (a/2) ||grad f||^2 - |l(f)|.
double emii_bound_check(const ComplexField& f, const PhysicsParams& params, double a);

/// Second moment int |x|^2 |u|^2.
double second_moment(const ComplexField& f);

/// ||u - v||_Sigma^2 (gradient, weighted and plain L2 parts).
double sigma_norm2(const ComplexField& f);

/// Column names of the shared CSV schema, in order.
inline constexpr const char* kFunctionalCsvHeader =
    "t,M,kinetic,potential,lp1,ang_mom,quad_form,energy,sigma_norm2";
/// Row prefix without the newline, 17 significant digits.
void write_csv_row(std::ostream& os, double t, const FunctionalReport& r);

}  // namespace rnls
