#include <benchmark/benchmark.h>

#include <vector>

#include "cheeger/cheeger_cut.hpp"
#include "cheeger/distance.hpp"
#include "cheeger/generators.hpp"
#include "cheeger/laplacian.hpp"
#include "cheeger/riccati.hpp"
#include "cheeger/spectral.hpp"

using namespace cheeger;

static void BM_Laplacian(benchmark::State& state) {
  const SurfaceMesh m = generate_icosphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(m));
  state.counters["vertices"] = static_cast<double>(m.vertex_count());
}
BENCHMARK(BM_Laplacian)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

static void BM_Lambda1(benchmark::State& state) {
  const LaplaceOperator op = laplacian(generate_icosphere(static_cast<int>(state.range(0))));
  SpectralOptions o;
  o.method = EigenMethod::iterative;
  for (auto _ : state) benchmark::DoNotOptimize(lambda1(op, o).lambda1);
}
BENCHMARK(BM_Lambda1)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

static void BM_Lambda1Dense(benchmark::State& state) {
  const LaplaceOperator op = laplacian(generate_icosphere(static_cast<int>(state.range(0))));
  SpectralOptions o;
  o.method = EigenMethod::dense;
  for (auto _ : state) benchmark::DoNotOptimize(lambda1(op, o).lambda1);
}
BENCHMARK(BM_Lambda1Dense)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

static void BM_MeshSweep(benchmark::State& state) {
  const SurfaceMesh m = generate_dumbbell(0.3, static_cast<int>(state.range(0)));
  const SpectralResult r = lambda1(laplacian(m));
  const std::vector<double> f(r.eigenvector.data(), r.eigenvector.data() + r.eigenvector.size());
  for (auto _ : state) benchmark::DoNotOptimize(cheeger_sweep(m, f).h);
}
BENCHMARK(BM_MeshSweep)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_ExactCut(benchmark::State& state) {
  const WeightedGraph g = generate_random_graph(static_cast<std::size_t>(state.range(0)), 0.3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(cheeger_exact(g).h);
}
BENCHMARK(BM_ExactCut)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_Dijkstra(benchmark::State& state) {
  const SurfaceMesh m = generate_icosphere(static_cast<int>(state.range(0)));
  const Index src = 0;
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_distance(m, std::span<const Index>(&src, 1)).values.data());
}
BENCHMARK(BM_Dijkstra)->DenseRange(3, 6)->Unit(benchmark::kMicrosecond);

static void BM_RiccatiClosedForm(benchmark::State& state) {
  const ComparisonParams p{3, 1.0, -2.5};
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(psi_closed_form(p, t));
    t = t > 0.2 ? 0.0 : t + 1e-6;
  }
}
BENCHMARK(BM_RiccatiClosedForm);

static void BM_RiccatiRK4(benchmark::State& state) {
  const ComparisonParams p{3, 1.0, 0.5};
  const double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_riccati(p, 1.0, step, RiccatiOptions{1e12, 1000}).psi.back());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RiccatiRK4)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
