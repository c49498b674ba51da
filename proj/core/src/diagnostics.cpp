#include "rnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rnls/spectral.hpp"

namespace rnls {

double virial_energy_form(const FunctionalReport& f, const PhysicsParams& params) {
  const double a = params.dim * (params.p - 1.0);
  return 0.5 * (4.0 - a) * f.kinetic - 0.5 * (a + 4.0) * f.potential +
         a * (f.energy - f.ang_mom);
}

double moment_derivative(const ComplexField& u) {
  const Grid& g = u.grid();
  std::vector<ComplexField> d;
  for (int a = 0; a < g.dim; ++a) d.push_back(spectral::derivative(u, a));
  double s = 0.0;
  for_each_point(g, [&](std::size_t i, const Point& x) {
    cplx xg = 0.0;
    for (int a = 0; a < g.dim; ++a) xg += x[a] * d[a][i];
    s += (std::conj(u[i]) * xg).imag();
  });
  return 2.0 * s * g.cell_volume();
}

double angular_momentum_rate(const ComplexField& u, const PhysicsParams& params) {
  const double c = params.rotation_coefficient();
  if (c == 0.0) return 0.0;
  const double g1 = params.gammas[0] * params.gammas[0];
  const double g2 = params.gammas[1] * params.gammas[1];
  double s = 0.0;
  for_each_point(u.grid(), [&](std::size_t i, const Point& x) { s += x[0] * x[1] * std::norm(u[i]); });
  return -c * (g2 - g1) * s * u.grid().cell_volume();
}

DiagnosticsRow diagnostics(const ComplexField& u, const PhysicsParams& params, double t,
                           double l_running_min) {
  DiagnosticsRow row;
  row.t = t;
  row.f = evaluate(u, params);
  double j = 0.0;
  for_each_point(u.grid(), [&](std::size_t i, const Point& x) {
    j += (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * std::norm(u[i]);
  });
  row.J = j * u.grid().cell_volume();
  row.Jp = moment_derivative(u);
  row.Jpp_vfm = virial_energy_form(row.f, params);
  row.grad_norm = std::sqrt(row.f.kinetic);
  row.tail_fraction = spectral::tail_fraction(u);
  row.l_running_min = std::min(l_running_min, row.f.ang_mom);
  return row;
}

void write_csv_row(std::ostream& os, const DiagnosticsRow& row) {
  write_csv_row(os, row.t, row.f);
  const auto saved = os.precision(17);
  os << ',' << row.J << ',' << row.Jp << ',' << row.Jpp_vfm << ',' << row.grad_norm << ','
     << row.tail_fraction << ',' << row.l_running_min << '\n';
  os.precision(saved);
}

}  // namespace rnls
