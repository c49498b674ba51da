#include <cmath>

#include "../common/fields.hpp"
#include "doctest.h"
#include "rnls/stability.hpp"

using namespace rnls;
using namespace rnls::testing;

TEST_CASE("phase aligned distance") {
  auto g = make_cubic_grid(2, 6.0, 64);
  auto phi = gaussian(g);
  CHECK(phase_aligned_sigma_distance(phi * std::polar(1.0, 2.1), phi) < 1e-13);
  auto d = random_sigma_direction(phi, 3);
  CHECK(sigma_norm2(d) == doctest::Approx(1.0).epsilon(1e-12));
  ComplexField pert = phi + d * cplx{1e-3, 0.0};
  CHECK(phase_aligned_sigma_distance(pert, phi) <= 1e-3 + 1e-15);
  auto d2 = random_sigma_direction(phi, 3);
  CHECK(std::sqrt(l2_norm_squared(d - d2)) == 0.0);
  CHECK(std::sqrt(l2_norm_squared(d - random_sigma_direction(phi, 4))) > 1e-3);
}

TEST_CASE("argument checks") {
  auto g = make_cubic_grid(2, 6.0, 32);
  GroundState gs;
  gs.field = gaussian(g);
  gs.params = params2d(3.0, 0.2);
  CHECK_THROWS_AS(stability_experiment(gs, {1e-3, 1e-2}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(stability_experiment(gs, {-1e-3}, 1.0), std::invalid_argument);
}

TEST_CASE("stable ground state: control and linear response") {
  auto g = make_cubic_grid(2, 6.0, 64);
  auto gs = minimize_nehari(1.0, params2d(2.0, 0.3), g);
  StabilityOptions o;
  o.sample_every = 50;
  auto rep = stability_experiment(gs, {0.0}, 3.0, o);
  REQUIRE(rep.runs.size() == 1u);
  CHECK(rep.runs[0].sup_distance < 1e-5);

  rep = stability_experiment(gs, {4e-3, 2e-3, 1e-3}, 3.0, o);
  CHECK(rep.stability_evidence);
  CHECK_FALSE(rep.instability_evidence);
  CHECK(rep.ratio_spread < o.linear_spread);
  for (const auto& r : rep.runs) {
    CHECK(r.termination == Termination::horizon_reached);
    CHECK(r.initial_distance <= 1.01 * r.delta);
  }
}

TEST_CASE("scaling perturbation destabilizes a supercritical ground state") {
  auto g = make_cubic_grid(2, 6.0, 128);
  auto gs = minimize_nehari(1.0, params2d(5.0, 0.2), g);
  StabilityOptions o;
  o.kind = PerturbationKind::scaling;
  o.sample_every = 50;
  o.dt = 5e-4;
  auto rep = stability_experiment(gs, {2e-2, 1e-2}, 6.0, o);
  CHECK(rep.indicator < 0.0);
  CHECK(rep.instability_evidence);
  CHECK_FALSE(rep.stability_evidence);
  for (const auto& r : rep.runs) {
    CAPTURE(r.delta);
    CHECK(r.sup_distance > o.epsilon_factor * r.delta);
  }
}
