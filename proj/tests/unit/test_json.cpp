#include <cmath>
#include <limits>

#include "../common/fields.hpp"
#include "doctest.h"
#include "rnls/json_io.hpp"

using namespace rnls;
using namespace rnls::testing;
using nlohmann::json;

TEST_CASE("physics params round trip") {
  auto pp = params2d(5.0, 0.25, 1.0, 1.5);
  pp.lomega_sign = 1;
  json j = pp;
  auto back = j.get<PhysicsParams>();
  CHECK(back.dim == 2);
  CHECK(back.p == 5.0);
  CHECK(back.gammas[1] == 1.5);
  CHECK(back.omega_rot == 0.25);
  CHECK(back.lomega_sign == 1);
  j.erase("lomega_sign");
  CHECK(j.get<PhysicsParams>().lomega_sign == -1);
}

TEST_CASE("Q profile round trip") {
  auto q = solve_q(2, 5.0);
  json j = q;
  auto back = j.get<QProfile>();
  CHECK(back.mass == q.mass);
  CHECK(back.r.size() == q.r.size());
  CHECK(back.value(1.3) == q.value(1.3));
  CHECK(json::parse(j.dump()).get<QProfile>().c_gn == q.c_gn);
}

TEST_CASE("classification report") {
  auto q = solve_q(2, 5.0);
  auto g = make_cubic_grid(2, 6.0, 32);
  auto pp = params2d(5.0, 0.2);
  ClassificationReport r;
  r.verdict = Verdict::K_minus;
  r.me_product = -std::numeric_limits<double>::infinity();
  json j = r;
  CHECK(j["verdict"] == "K_minus");
  CHECK(j["me_product"].is_null());
  CHECK(j.contains("note"));
  r.verdict = Verdict::K_plus;
  r.me_product = 0.5;
  j = r;
  CHECK_FALSE(j.contains("note"));
  CHECK(j["me_product"] == 0.5);
}

TEST_CASE("trajectory metadata") {
  auto g = make_cubic_grid(2, 6.0, 32);
  SimState s{gaussian(g, 0.3), params2d(3.0, 0.2), 0.0, 0};
  EvolveOptions o;
  o.horizon = 0.05;
  o.dt = 1e-2;
  auto tr = evolve(s, o);
  json j = tr;
  CHECK(j["termination"] == "horizon_reached");
  CHECK(j["steps"] == 5);
}
