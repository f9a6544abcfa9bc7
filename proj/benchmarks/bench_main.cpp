#include <benchmark/benchmark.h>

#include <random>

#include "susyhom/cochain.hpp"
#include "susyhom/graph_complex.hpp"
#include "susyhom/qubit.hpp"
#include "susyhom/vqe.hpp"

using namespace susyhom;

namespace {

Graph sparse_graph(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge(2.5 / static_cast<double>(n));
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) e.emplace_back(i, j);
  return Graph(n, e);
}

void BM_SectorEnumeration(benchmark::State& state) {
  const Graph g = sparse_graph(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    GradedSpace space = independence_space(g);
    benchmark::DoNotOptimize(space.total_dimension());
  }
}
BENCHMARK(BM_SectorEnumeration)->Arg(12)->Arg(16)->Arg(20);

void BM_SectorMatrix(benchmark::State& state) {
  const Graph g = sparse_graph(static_cast<std::size_t>(state.range(0)), 2);
  const GradedSpace space = independence_space(g);
  const FermionOperator d = hardcore_supercharge(g);
  const std::size_t l = g.vertices() / 4;
  for (auto _ : state) benchmark::DoNotOptimize(sector_matrix(d, space, l).nonzeros());
}
BENCHMARK(BM_SectorMatrix)->Arg(10)->Arg(14);

void BM_ExactRank(benchmark::State& state) {
  const Graph g = sparse_graph(static_cast<std::size_t>(state.range(0)), 3);
  const CochainComplex c = independence_complex(g);
  const std::size_t l = g.vertices() / 4;
  const ExactSparse m = c.coboundary(l);
  for (auto _ : state) benchmark::DoNotOptimize(exact_rank(m));
}
BENCHMARK(BM_ExactRank)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_LaplacianSpectrum(benchmark::State& state) {
  const CochainComplex c = independence_complex(Graph::cycle(static_cast<std::size_t>(state.range(0))));
  const std::size_t l = c.modes() / 3;
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(laplacian(c, l)).size());
}
BENCHMARK(BM_LaplacianSpectrum)->Arg(12)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_StatevectorExpectation(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const QubitOperator h = jw_laplacian(Graph::cycle(n)).expand();
  Statevector psi = Statevector::Constant(Eigen::Index{1} << n, 1.0);
  psi.normalize();
  for (auto _ : state) benchmark::DoNotOptimize(h.expectation(psi));
}
BENCHMARK(BM_StatevectorExpectation)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
