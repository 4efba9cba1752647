#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "mcf/kernels.hpp"
#include "mcf/verification.hpp"

using namespace mcf;

namespace {

std::vector<double> profile(const RadialGrid& g) {
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = 0.5 * g.r(i) * g.r(i) + 1.0;
  return f;
}

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_Operator(benchmark::State& st) {
  const auto g = build_grid(static_cast<std::size_t>(st.range(0)));
  const auto f = profile(*g);
  std::vector<double> out(g->size());
  for (auto _ : st) {
    evaluate_operator(Form::V, 2, *g, f, Operator::Full, out, exec_of(st));
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_Assemble(benchmark::State& st) {
  const auto g = build_grid(static_cast<std::size_t>(st.range(0)));
  const auto f = profile(*g);
  Tridiagonal sys(g->size());
  for (auto _ : st) {
    assemble_implicit_system(Form::V, 2, *g, f, 1e-3, BoundaryCondition::robin(), sys, exec_of(st));
    benchmark::DoNotOptimize(sys.rhs.data());
  }
}

void BM_Barrier(benchmark::State& st) {
  const auto g = build_grid(static_cast<std::size_t>(st.range(0)));
  std::vector<double> ts(20);
  for (int j = 0; j < 20; ++j) ts[j] = j / 19.0;
  const BarrierSpec spec{BarrierSpec::Kind::SubU, 1.0, 2};
  for (auto _ : st) benchmark::DoNotOptimize(barrier_residual(spec, *g, ts, exec_of(st)));
}

void BM_WStep(benchmark::State& st) {
  const auto g = build_grid(static_cast<std::size_t>(st.range(0)));
  const FlowState coeff(ScalarField(g, profile(*g)), 0.0, Form::V, 2);
  const auto w = ScalarField::sample(g, [](double r) { return r * r; });
  for (auto _ : st) benchmark::DoNotOptimize(step_w_equation(w, coeff, 1e-3, exec_of(st)));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {401, 4001, 40001, 400001}) {
    for (long par : {0, 1}) b->Args({n, par});
  }
  b->ArgNames({"n", "parallel"});
}

}  // namespace

BENCHMARK(BM_Operator)->Apply(sizes);
BENCHMARK(BM_Assemble)->Apply(sizes);
BENCHMARK(BM_Barrier)->Apply(sizes);
BENCHMARK(BM_WStep)->Apply(sizes);

BENCHMARK_MAIN();
