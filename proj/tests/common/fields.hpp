#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "rnls/field.hpp"
#include "rnls/params.hpp"

namespace rnls::testing {

inline ComplexField gaussian(const GridPtr& g, double amplitude = 1.0 / std::sqrt(std::numbers::pi),
                             double width = 1.0) {
  return ComplexField::sample(g, [&](const Point& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return cplx{amplitude * std::exp(-0.5 * r2 / (width * width)), 0.0};
  });
}

/// pi^{-1/2} (x1 + i x2) e^{-|x|^2/2}, unit mass in 2D.
inline ComplexField vortex(const GridPtr& g, int charge = 1) {
  return ComplexField::sample(g, [&](const Point& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return cplx{x[0], charge * x[1]} * std::exp(-0.5 * r2) / std::sqrt(std::numbers::pi);
  });
}

/// Smooth random field: random low-degree complex polynomial times a
/// randomly centered Gaussian. Resolved on boxes with L >= 6, h <= 0.25.
inline ComplexField random_smooth(const GridPtr& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double c[12];
  for (double& v : c) v = u(rng);
  const double w = 0.8 + 0.4 * (u(rng) + 1.0) / 2.0;
  const double s1 = 0.5 * u(rng), s2 = 0.5 * u(rng);
  return ComplexField::sample(g, [&](const Point& x) {
    const double y1 = x[0] - s1, y2 = x[1] - s2, y3 = x[2];
    const cplx poly{1.0 + c[0] * y1 + c[1] * y2 + c[2] * y1 * y2 + c[3] * y3,
                    c[4] + c[5] * y1 + c[6] * y2 + c[7] * (y1 * y1 - y2 * y2) + c[8] * y3};
    return poly * (1.0 + 0.5 * c[9]) * std::exp(-0.5 * (y1 * y1 + y2 * y2 + y3 * y3) / (w * w));
  });
}

inline PhysicsParams params2d(double p, double omega_rot = 0.0, double g1 = 1.0, double g2 = 1.0) {
  PhysicsParams pp;
  pp.dim = 2;
  pp.p = p;
  pp.gammas = {g1, g2, 1.0};
  pp.omega_rot = omega_rot;
  return pp;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace rnls::testing
