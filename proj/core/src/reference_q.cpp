#include "rnls/reference_q.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/numeric/odeint.hpp>

#include "rnls/json_io.hpp"

namespace rnls {

namespace {

namespace odeint = boost::numeric::odeint;

// Q, Q', and running integrals of r^{N-1} Q^2, r^{N-1} Q'^2, r^{N-1} Q^{p+1}.
using State = std::array<double, 5>;

constexpr double kDecay = std::numbers::sqrt2;

struct RadialRhs {
  int dim;
  double p;
  void operator()(const State& s, State& ds, double r) const {
    const double q = s[0], dq = s[1];
    const double w = std::pow(r, dim - 1);
    const double qp = std::pow(std::abs(q), p);
    ds[0] = dq;
    ds[1] = -(dim - 1) * dq / r + 2.0 * q - 2.0 * std::copysign(qp, q);
    ds[2] = w * q * q;
    ds[3] = w * dq * dq;
    ds[4] = w * qp * std::abs(q);
  }
};

double sphere_area(int dim) { return dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi; }

// Series start near the origin: Q = a + b r^2/2, b = 2a(1 - a^{p-1})/N.
State initial_state(int dim, double p, double a, double r0) {
  const double b = 2.0 * a * (1.0 - std::pow(a, p - 1.0)) / dim;
  State s{a + 0.5 * b * r0 * r0, b * r0, 0.0, 0.0, 0.0};
  const double w = std::pow(r0, dim) / dim;
  s[2] = w * a * a;
  s[4] = w * std::pow(a, p + 1.0);
  return s;
}

enum class Shot { overshoot, undershoot, undecided };

struct ShootOptions {
  double abs_err;
  double rel_err;
  double r_end = 40.0;
};

template <typename Observer>
Shot shoot(int dim, double p, double a, const ShootOptions& opt, Observer&& obs) {
  const double r0 = 1e-6;
  State s = initial_state(dim, p, a, r0);
  auto stepper = odeint::make_dense_output(opt.abs_err, opt.rel_err,
                                           odeint::runge_kutta_dopri5<State>());
  stepper.initialize(s, r0, 1e-3);
  RadialRhs rhs{dim, p};
  while (stepper.current_time() < opt.r_end) {
    stepper.do_step(rhs);
    const State& cur = stepper.current_state();
    if (!obs(stepper)) return Shot::undecided;
    if (cur[0] < 0.0) return Shot::overshoot;
    if (cur[1] > 0.0) return Shot::undershoot;
  }
  return Shot::undecided;
}

double tail_shape(int dim, double r) {
  const double nu = 0.5 * (dim - 2);
  return std::pow(r, -nu) * boost::math::cyl_bessel_k(nu, kDecay * r);
}

double tail_slope(int dim, double r) {
  const double nu = 0.5 * (dim - 2);
  return -kDecay * std::pow(r, -nu) * boost::math::cyl_bessel_k(nu + 1.0, kDecay * r);
}

double gn_closed_form(int dim, double p, double mass) {
  const double n = dim;
  const double k = 2.0 * n * (p - 1.0) / (2.0 * (p + 1.0) - n * (p - 1.0));
  return std::pow(k, (4.0 - n * (p - 1.0)) / 4.0) * (p + 1.0) /
         (n * (p - 1.0) * std::pow(std::sqrt(mass), p - 1.0));
}

}  // namespace

double QProfile::value(double radius) const {
  if (radius >= r_match) return tail_coefficient * tail_shape(dim, std::max(radius, 1e-300));
  const double t = radius / dr;
  const std::size_t i = std::min(static_cast<std::size_t>(t), r.size() - 2);
  const double s = t - static_cast<double>(i);
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * q[i] + h10 * dr * dq[i] + h01 * q[i + 1] + h11 * dr * dq[i + 1];
}

QProfile solve_q(int dim, double p, double tol) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("solve_q: N must be 2 or 3");
  const double p_crit = 1.0 + 4.0 / dim;
  if (p < p_crit - 1e-12 || (dim == 3 && p >= 5.0))
    throw std::invalid_argument("solve_q: p outside [1+4/N, 2^*)");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_q: tol must be positive");

  ShootOptions opt{std::max(tol * 1e-3, 1e-15), std::max(tol * 1e-3, 1e-15)};
  auto always = [](const auto&) { return true; };

  // Bracket Q(0): a <= 1 undershoots, large a overshoots.
  double lo = 1.0, hi = 2.0;
  for (int k = 0; shoot(dim, p, hi, opt, always) != Shot::overshoot; ++k) {
    lo = hi;
    hi *= 2.0;
    if (k > 60) throw std::runtime_error("solve_q: cannot bracket Q(0)");
  }
  for (int k = 0; k < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    const Shot s = shoot(dim, p, mid, opt, always);
    if (s == Shot::overshoot) hi = mid;
    else if (s == Shot::undershoot) lo = mid;
    else break;
  }
  const double a = 0.5 * (lo + hi);

  QProfile out;
  out.dim = dim;
  out.p = p;
  out.tol = tol;
  out.q0 = a;

  // Integrate the shot until Q falls below 1e-4 Q(0), where the linear tail
  // takes over; record dense samples on the way.
  const double q_switch = 1e-4 * a;
  out.dr = 1.0 / 256.0;
  State at_match{};
  double r_match = 0.0;
  std::vector<double> rs, qs, dqs;
  rs.push_back(0.0);
  qs.push_back(a);
  dqs.push_back(0.0);
  State tmp{};
  shoot(dim, p, a, opt, [&](auto& stepper) {
    const double t1 = stepper.current_time();
    double next = static_cast<double>(rs.size()) * out.dr;
    while (next <= t1) {
      stepper.calc_state(next, tmp);
      if (tmp[0] <= q_switch) break;
      rs.push_back(next);
      qs.push_back(tmp[0]);
      dqs.push_back(tmp[1]);
      next = static_cast<double>(rs.size()) * out.dr;
    }
    if (next <= t1) {
      r_match = rs.back();
      at_match = tmp;
      stepper.calc_state(r_match, at_match);
      return false;
    }
    return true;
  });
  if (r_match <= 0.0) throw std::runtime_error("solve_q: decaying solution not isolated");
  out.r_match = r_match;
  out.tail_coefficient = at_match[0] / tail_shape(dim, r_match);

  const double area = sphere_area(dim);
  // Continue samples with the tail until it is below 1e-12 Q(0).
  for (double r = r_match + out.dr;; r += out.dr) {
    const double v = out.tail_coefficient * tail_shape(dim, r);
    rs.push_back(static_cast<double>(rs.size()) * out.dr);
    qs.push_back(v);
    dqs.push_back(out.tail_coefficient * tail_slope(dim, rs.back()));
    if (v < 1e-12 * a) break;
  }
  out.r_max = rs.back();
  out.r = std::move(rs);
  out.q = std::move(qs);
  out.dq = std::move(dqs);

  // Interior norms from the ODE accumulators, tail norms by quadrature.
  using boost::math::quadrature::gauss_kronrod;
  const double c = out.tail_coefficient;
  const double r_far = r_match + 60.0;
  auto w = [dim](double r) { return std::pow(r, dim - 1); };
  const double tail_mass = gauss_kronrod<double, 61>::integrate(
      [&](double r) { const double v = c * tail_shape(dim, r); return w(r) * v * v; },
      r_match, r_far, 15, 1e-14);
  const double tail_grad = gauss_kronrod<double, 61>::integrate(
      [&](double r) { const double v = c * tail_slope(dim, r); return w(r) * v * v; },
      r_match, r_far, 15, 1e-14);
  const double tail_lp1 = gauss_kronrod<double, 61>::integrate(
      [&](double r) { return w(r) * std::pow(c * tail_shape(dim, r), p + 1.0); },
      r_match, r_far, 15, 1e-14);
  out.mass = area * (at_match[2] + tail_mass);
  out.grad = area * (at_match[3] + tail_grad);
  out.lp1 = area * (at_match[4] + tail_lp1);
  out.e00 = 0.5 * out.grad - 2.0 / (p + 1.0) * out.lp1;

  // Pohozaev consistency identities.
  const double n = dim;
  const double k = 2.0 * n * (p - 1.0) / (2.0 * (p + 1.0) - n * (p - 1.0));
  const double sc = out.s_c();
  const double qn = std::sqrt(out.mass);
  if (sc > 1e-12) {
    const double lhs1 = std::sqrt(out.grad) * std::pow(qn, (1.0 - sc) / sc);
    const double rhs1 = std::sqrt(k) * std::pow(qn, 1.0 / sc);
    out.pohozaev_grad_residual = std::abs(lhs1 / rhs1 - 1.0);
    const double lhs2 = out.e00 * std::pow(out.mass, (1.0 - sc) / sc);
    const double rhs2 = sc / n * k * std::pow(qn, 2.0 / sc);
    out.pohozaev_energy_residual = std::abs(lhs2 / rhs2 - 1.0);
  } else {
    // Mass-critical case: only the gradient relation and E00 = 0 survive.
    out.pohozaev_grad_residual = std::abs(std::sqrt(out.grad / (k * out.mass)) - 1.0);
    out.pohozaev_energy_residual = std::abs(out.e00) / out.grad;
  }
  out.c_gn = gn_closed_form(dim, p, out.mass);
  const double gn_mismatch = std::abs(radial_gn_ratio(out) / out.c_gn - 1.0);
  out.certified = out.pohozaev_grad_residual < 1e-6 && out.pohozaev_energy_residual < 1e-6 &&
                  gn_mismatch < 1e-6 && out.q.back() < 1e-10 * a;
  return out;
}

double radial_gn_ratio(const QProfile& q) {
  const double a = q.dim * (q.p - 1.0) / 2.0;
  return q.lp1 / (std::pow(std::sqrt(q.grad), a) * std::pow(std::sqrt(q.mass), q.p + 1.0 - a));
}

double gn_constant(const QProfile& q) {
  const double c = gn_closed_form(q.dim, q.p, q.mass);
  if (std::abs(radial_gn_ratio(q) / c - 1.0) > 1e-6)
    throw std::runtime_error("gn_constant: profile fails the sharpness cross-check");
  return c;
}

RealField sample_q(const QProfile& q, const GridPtr& grid) {
  if (grid->dim != q.dim) throw std::invalid_argument("sample_q: dimension mismatch");
  return RealField::sample(grid, [&](const Point& x) {
    return q.value(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
}

Thresholds thresholds(const QProfile& q, double u0_mass) {
  const double sc = q.s_c();
  if (!(sc > 0.0)) throw std::invalid_argument("thresholds: s_c must be positive");
  if (!(u0_mass > 0.0)) throw std::invalid_argument("thresholds: u0 mass must be positive");
  const double n = q.dim, p = q.p;
  const double qn = std::sqrt(q.mass);
  Thresholds t;
  t.s_c = sc;
  t.x1 = std::pow((p + 1.0) / (n * (p - 1.0) * q.c_gn), 1.0 / (sc * (p - 1.0))) *
         std::pow(std::sqrt(u0_mass), -(1.0 - sc) / sc);
  t.x_max = std::sqrt(q.grad) * std::pow(qn, (1.0 - sc) / sc);
  t.lower_bound_prefactor = std::pow((p - 1.0) * n / 4.0, 1.0 / (sc * (p - 1.0)));
  t.x_r = t.lower_bound_prefactor * t.x_max;
  t.me_threshold = std::pow(q.e00, sc) * std::pow(q.mass, 1.0 - sc);
  t.grad_threshold = std::pow(std::sqrt(q.grad), sc) * std::pow(qn, 1.0 - sc);
  return t;
}

double threshold_f(const QProfile& q, double u0_mass, double x) {
  const double a = q.dim * (q.p - 1.0) / 2.0;
  const double beta = 2.0 * q.c_gn / (q.p + 1.0) * std::pow(std::sqrt(u0_mass), q.p + 1.0 - a);
  return 0.5 * x * x - beta * std::pow(x, a);
}

double threshold_h(const QProfile& q, double x) {
  const double a = q.dim * (q.p - 1.0) / 2.0;
  return 0.5 * x * x - 2.0 * q.c_gn / (q.p + 1.0) * std::pow(x, a);
}

std::filesystem::path q_cache_name(int dim, double p, double tol) {
  std::ostringstream os;
  os << "q_N" << dim << "_p" << p << "_tol" << std::setprecision(3) << tol << ".json";
  return os.str();
}

QProfile load_or_solve_q(int dim, double p, double tol, const std::filesystem::path& cache_dir,
                         bool* hit) {
  const auto path = cache_dir / q_cache_name(dim, p, tol);
  if (std::filesystem::exists(path)) {
    std::ifstream is(path);
    nlohmann::json j;
    try {
      is >> j;
      QProfile q = j.get<QProfile>();
      if (q.dim == dim && q.p == p && q.tol == tol) {
        if (hit) *hit = true;
        return q;
      }
    } catch (const nlohmann::json::exception&) {
      // Unreadable cache entries are recomputed and overwritten.
    }
  }
  QProfile q = solve_q(dim, p, tol);
  std::filesystem::create_directories(cache_dir);
  std::ofstream os(path);
  os << nlohmann::json(q).dump(1) << '\n';
  if (hit) *hit = false;
  return q;
}

}  // namespace rnls
