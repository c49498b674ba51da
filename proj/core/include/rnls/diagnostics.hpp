#pragma once

#include <iosfwd>

#include "rnls/functionals.hpp"

namespace rnls {

struct DiagnosticsRow {
  double t = 0.0;
  FunctionalReport f;
  double J = 0.0;        // int |x|^2 |u|^2
  double Jp = 0.0;       // 2 Im int (grad u . x) conj(u)
  double Jpp_vfm = 0.0;  // virial right-hand side in energy form
  double grad_norm = 0.0;
  double tail_fraction = 0.0;
  double l_running_min = 0.0;
};

/// Row for a state at time t; l_running_min is carried in by the caller
/// (pass +infinity at the first sample to start from l(u)).
DiagnosticsRow diagnostics(const ComplexField& u, const PhysicsParams& params, double t,
                           double l_running_min);

/// J'' from the energy form:
/// (4 - N(p-1))/2 ||grad u||^2 - (N(p-1)+4)/2 int V|u|^2 + N(p-1)(E - l).
double virial_energy_form(const FunctionalReport& f, const PhysicsParams& params);

/// 2 Im int conj(u) x . grad u.
double moment_derivative(const ComplexField& u);

/// Instantaneous d l/dt = -(c/2) int (x1 d2 V - x2 d1 V) |u|^2, which vanishes
/// for traps with gamma_1 = gamma_2.
double angular_momentum_rate(const ComplexField& u, const PhysicsParams& params);

inline constexpr const char* kDiagnosticsCsvHeader =
    "t,M,kinetic,potential,lp1,ang_mom,quad_form,energy,sigma_norm2,"
    "J,Jp,Jpp_vfm,grad_norm,tail_fraction,l_running_min";
/// One newline-terminated line, 17 significant digits.
void write_csv_row(std::ostream& os, const DiagnosticsRow& row);

}  // namespace rnls
