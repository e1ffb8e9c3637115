// Serial vs OpenMP timings of the element-wise kernels. Thread count follows
// OMP_NUM_THREADS.

#include <map>

#include <benchmark/benchmark.h>

#include "hdgi/norms.hpp"

using namespace hdgi;

namespace {

struct Fixture {
  Preset p = preset("example1");
  Mesh mesh;
  SchemeParams params;
  std::vector<LocalSystem> locals;
  CondensedSystem condensed;
  DiscreteSolution uh;

  explicit Fixture(int n)
      : mesh(build_mesh(p.geometry, n, ElementKind::rectangle)),
        params(SchemeParams::uniform(mesh, default_penalty(p.data))),
        locals(local_systems(mesh, p.data, params, Exec::serial)),
        condensed(condense(mesh, locals, boundary_traces(mesh, p.data), Exec::serial)),
        uh(recover(mesh, condensed, solve(condensed, SolverMethod::direct).trace, Exec::serial)) {}
};

const Fixture& fixture(int n) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Fixture(n)).first;
  return it->second;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void BM_LocalSystems(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(local_systems(f.mesh, f.p.data, f.params, exec_of(state)));
}

void BM_Condense(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(condense(f.mesh, f.locals, boundary_traces(f.mesh, f.p.data), exec_of(state)));
}

void BM_ErrorsVsExact(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(errors_vs_exact(f.mesh, f.uh, f.p.data, exec_of(state)));
}

void BM_ConjugateGradient(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        conjugate_gradient(f.condensed.schur, f.condensed.load, 1e-10, 10 * f.condensed.dim(), exec_of(state)));
}

void args(benchmark::internal::Benchmark* b) {
  b->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);
  for (int n : {32, 64, 128})
    for (int par : {0, 1}) b->Args({n, par});
}

}  // namespace

BENCHMARK(BM_LocalSystems)->Apply(args);
BENCHMARK(BM_Condense)->Apply(args);
BENCHMARK(BM_ErrorsVsExact)->Apply(args);
BENCHMARK(BM_ConjugateGradient)->Apply(args);

BENCHMARK_MAIN();
