#include "rnls/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "rnls/functionals.hpp"

namespace rnls {

double phase_aligned_sigma_distance(const ComplexField& u, const ComplexField& phi) {
  const cplx overlap = inner_product(phi, u);
  const cplx rot = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
  ComplexField d = u;
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= rot * phi[i];
  return std::sqrt(sigma_norm2(d));
}

ComplexField random_sigma_direction(const ComplexField& phi, std::uint64_t seed) {
  const Grid& g = phi.grid();
  const double m = l2_norm_squared(phi);
  const double width = std::sqrt(std::max(second_moment(phi) / (m * g.dim), 1e-6));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  // Monomials x1^a x2^b (x3^c) of total degree <= 2.
  std::vector<std::array<int, 3>> powers;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; a + b <= 2; ++b)
      for (int c = 0; a + b + c <= 2; ++c)
        if (g.dim == 3 || c == 0) powers.push_back({a, b, c});
  std::vector<cplx> coef;
  for (std::size_t k = 0; k < powers.size(); ++k) coef.emplace_back(dist(rng), dist(rng));

  ComplexField f(phi.grid_ptr());
  for_each_point(g, [&](std::size_t i, const Point& x) {
    const double y[3] = {x[0] / width, x[1] / width, x[2] / width};
    cplx s = 0.0;
    for (std::size_t k = 0; k < powers.size(); ++k)
      s += coef[k] * std::pow(y[0], powers[k][0]) * std::pow(y[1], powers[k][1]) *
           std::pow(y[2], powers[k][2]);
    f[i] = s * std::exp(-0.5 * (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]));
  });
  f *= cplx{1.0 / std::sqrt(sigma_norm2(f)), 0.0};
  return f;
}

std::string to_string(PerturbationKind k) {
  return k == PerturbationKind::random ? "random" : "scaling";
}

StabilityReport stability_experiment(const GroundState& gs, const std::vector<double>& deltas,
                                     double horizon, const StabilityOptions& options) {
  if (deltas.empty()) throw std::invalid_argument("stability_experiment: no deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= 0.0)) throw std::invalid_argument("stability_experiment: negative delta");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      throw std::invalid_argument("stability_experiment: deltas must decrease");
  }
  if (!(horizon > 0.0)) throw std::invalid_argument("stability_experiment: horizon must be positive");

  const ComplexField& phi = gs.field;
  const double mass = l2_norm_squared(phi);
  StabilityReport rep;
  rep.kind = options.kind;
  rep.horizon = horizon;
  rep.indicator = gs.params.mass_supercritical() ? instability_indicator(gs)
                                                 : std::numeric_limits<double>::quiet_NaN();
  const ComplexField dir = options.kind == PerturbationKind::random
                               ? random_sigma_direction(phi, options.seed)
                               : ComplexField{};

  for (double delta : deltas) {
    ComplexField u0 = phi;
    if (options.kind == PerturbationKind::random) {
      for (std::size_t i = 0; i < u0.size(); ++i) u0[i] += delta * dir[i];
    } else if (delta > 0.0) {
      u0 = scaling_dilation(phi, 1.0 + options.scaling_sign * delta);
    }
    u0 *= cplx{std::sqrt(mass / l2_norm_squared(u0)), 0.0};

    StabilityRun run;
    run.delta = delta;
    run.initial_distance = phase_aligned_sigma_distance(u0, phi);
    SimState state{u0, gs.params, 0.0, 0};
    EvolveOptions eo;
    eo.horizon = horizon;
    eo.dt = options.dt;
    eo.sample_every = options.sample_every;
    eo.on_sample = [&](const SimState& s, const DiagnosticsRow&) {
      const double d = phase_aligned_sigma_distance(s.field, phi);
      if (d > run.sup_distance) {
        run.sup_distance = d;
        run.time_of_sup = s.t;
      }
    };
    try {
      run.termination = evolve(state, eo).termination;
    } catch (const NonFiniteStateError&) {
      run.termination = Termination::blowup_detected;
    }
    run.ratio = delta > 0.0 ? run.sup_distance / delta : 0.0;
    rep.runs.push_back(run);
  }

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool all_large = true, all_completed = true;
  int positive = 0;
  for (const auto& r : rep.runs) {
    if (r.delta <= 0.0) continue;
    ++positive;
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    const bool blew = r.termination != Termination::horizon_reached;
    all_completed = all_completed && !blew;
    all_large = all_large && (blew || r.sup_distance > options.epsilon_factor * r.delta);
  }
  rep.ratio_spread = positive > 0 && lo > 0.0 ? hi / lo : 0.0;
  rep.stability_evidence = positive >= 2 && all_completed && rep.ratio_spread < options.linear_spread;
  rep.instability_evidence = positive >= 1 && all_large;
  return rep;
}

}  // namespace rnls
