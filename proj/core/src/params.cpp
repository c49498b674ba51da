#include "rnls/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rnls {

double PhysicsParams::gamma_min() const {
  double g = std::abs(gammas[0]);
  for (int a = 1; a < dim; ++a) g = std::min(g, std::abs(gammas[a]));
  return g;
}

bool PhysicsParams::isotropic() const {
  for (int a = 1; a < dim; ++a)
    if (std::abs(gammas[a]) != std::abs(gammas[0])) return false;
  return true;
}

double PhysicsParams::critical_exponent() const { return 1.0 + 4.0 / dim; }

double PhysicsParams::sobolev_exponent() const {
  return dim == 2 ? std::numeric_limits<double>::infinity() : 1.0 + 4.0 / (dim - 2);
}

double PhysicsParams::s_c() const {
  const double s = 0.5 * dim - 2.0 / (p - 1.0);
  return std::abs(s) < 1e-12 ? 0.0 : s;
}

bool PhysicsParams::mass_supercritical() const {
  const double s = s_c();
  return s > 0.0 && s < 1.0;
}

std::vector<std::string> PhysicsParams::violations() const {
  std::vector<std::string> v;
  if (dim != 2 && dim != 3) v.push_back("physics.dim must be 2 or 3");
  if (!(p > 1.0) || !(p < sobolev_exponent()))
    v.push_back("physics.p must satisfy 1 < p < 2* (2* = 5 in 3D, unbounded in 2D)");
  for (int a = 0; a < std::min(dim, 3); ++a)
    if (!(gammas[a] > 0.0)) v.push_back("physics.gamma must be positive on every axis");
  if (omega_rot < 0.0) v.push_back("physics.omega must be |Omega| >= 0");
  if (lomega_sign != 1 && lomega_sign != -1) v.push_back("physics.lomega_sign must be +1 or -1");
  return v;
}

void PhysicsParams::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid physics parameters:";
  for (const auto& s : v) os << ' ' << s << ';';
  throw std::invalid_argument(os.str());
}

double potential_at(const PhysicsParams& params, const Point& x) {
  double v = 0.0;
  for (int a = 0; a < params.dim; ++a) v += params.gammas[a] * params.gammas[a] * x[a] * x[a];
  return v;
}

}  // namespace rnls
