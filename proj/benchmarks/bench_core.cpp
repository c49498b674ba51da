#include <benchmark/benchmark.h>

#include <cmath>

#include "rnls/diagnostics.hpp"
#include "rnls/dynamics.hpp"
#include "rnls/functionals.hpp"
#include "rnls/spectral.hpp"

using namespace rnls;

namespace {

PhysicsParams params(double p) {
  PhysicsParams pp;
  pp.dim = 2;
  pp.p = p;
  pp.omega_rot = 0.3;
  return pp;
}

ComplexField datum(const GridPtr& g) {
  return ComplexField::sample(g, [](const Point& x) {
    return cplx{1.0 + 0.3 * x[0], 0.2 * x[1]} * std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]));
  });
}

void BM_Forward(benchmark::State& st) {
  auto g = make_cubic_grid(2, 8.0, st.range(0));
  auto u = datum(g);
  for (auto _ : st) benchmark::DoNotOptimize(spectral::forward(u));
  st.SetItemsProcessed(st.iterations() * g->size());
}
BENCHMARK(BM_Forward)->Arg(128)->Arg(256)->Arg(512);

void BM_SplitStep(benchmark::State& st) {
  auto g = make_cubic_grid(2, 8.0, st.range(0));
  auto u = datum(g);
  SplitStepPropagator prop(g, params(3.0), 1e-3);
  for (auto _ : st) prop.step(u);
  st.SetItemsProcessed(st.iterations() * g->size());
}
BENCHMARK(BM_SplitStep)->Arg(128)->Arg(256)->Arg(512);

void BM_SplitStep3D(benchmark::State& st) {
  auto g = make_cubic_grid(3, 6.0, st.range(0));
  PhysicsParams pp = params(3.0);
  pp.dim = 3;
  auto u = ComplexField::sample(g, [](const Point& x) {
    return cplx{std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])), 0.0};
  });
  SplitStepPropagator prop(g, pp, 1e-3);
  for (auto _ : st) prop.step(u);
}
BENCHMARK(BM_SplitStep3D)->Arg(32)->Arg(64);

void BM_Evaluate(benchmark::State& st) {
  auto g = make_cubic_grid(2, 8.0, st.range(0));
  auto u = datum(g);
  auto pp = params(5.0);
  for (auto _ : st) benchmark::DoNotOptimize(evaluate(u, pp));
}
BENCHMARK(BM_Evaluate)->Arg(128)->Arg(256);

void BM_Diagnostics(benchmark::State& st) {
  auto g = make_cubic_grid(2, 8.0, st.range(0));
  auto u = datum(g);
  auto pp = params(5.0);
  for (auto _ : st) benchmark::DoNotOptimize(diagnostics(u, pp, 0.0, 0.0));
}
BENCHMARK(BM_Diagnostics)->Arg(128)->Arg(256);

}  // namespace
BENCHMARK_MAIN();
