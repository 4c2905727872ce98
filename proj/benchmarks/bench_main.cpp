#include <benchmark/benchmark.h>

#include "lwpr/canonical.hpp"
#include "lwpr/generators.hpp"
#include "lwpr/laws.hpp"
#include "lwpr/limits.hpp"
#include "lwpr/neighborhood.hpp"
#include "lwpr/pagerank.hpp"
#include "lwpr/rng.hpp"

namespace {

const lwpr::BiDegreeLaw& law() {
  static const lwpr::BiDegreeLaw l = lwpr::BiDegreeLaw::parse("1:1:0.2,2:2:0.3,1:3:0.25,3:1:0.25");
  return l;
}

lwpr::DirectedMultigraph dcm(std::size_t n) {
  lwpr::RngStream rng(42, lwpr::streams::kGraph);
  return lwpr::gen_dcm(lwpr::sample_bidegree_sequence(law(), n, rng), rng);
}

void BM_Dcm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  lwpr::RngStream rng(7, lwpr::streams::kGraph);
  for (auto _ : state) {
    auto g = lwpr::gen_dcm(lwpr::sample_bidegree_sequence(law(), n, rng), rng);
    benchmark::DoNotOptimize(g.num_edges());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Dcm)->Arg(10'000)->Arg(100'000);

void BM_Dpa(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  lwpr::RngStream rng(7, lwpr::streams::kGraph);
  for (auto _ : state) {
    auto g = lwpr::gen_dpa(n, {2, 1.0}, rng);
    benchmark::DoNotOptimize(g.num_edges());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Dpa)->Arg(10'000)->Arg(100'000);

void BM_PageRankSolve(benchmark::State& state) {
  const auto g = dcm(static_cast<std::size_t>(state.range(0)));
  lwpr::PageRankParams p;
  for (auto _ : state) benchmark::DoNotOptimize(lwpr::solve_pagerank(g, p).values.data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PageRankSolve)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_PageRankTruncated(benchmark::State& state) {
  const auto g = dcm(100'000);
  lwpr::PageRankParams p;
  for (auto _ : state) benchmark::DoNotOptimize(lwpr::pagerank_truncated(g, p, static_cast<int>(state.range(0))).values.data());
}
BENCHMARK(BM_PageRankTruncated)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_CanonicalCode(benchmark::State& state) {
  const auto g = dcm(20'000);
  const auto k = static_cast<std::uint32_t>(state.range(0));
  lwpr::Vertex v = 0;
  for (auto _ : state) {
    auto code = lwpr::canonical_code(lwpr::explore_neighborhood(g, v, k));
    benchmark::DoNotOptimize(code.bytes.data());
    v = (v + 1) % g.num_vertices();
  }
}
BENCHMARK(BM_CanonicalCode)->Arg(1)->Arg(2)->Arg(3);

void BM_GwLimitRootScore(benchmark::State& state) {
  const auto N = static_cast<std::uint32_t>(state.range(0));
  const auto biased = law().size_biased();
  lwpr::RngStream rng(7, lwpr::streams::kLimits);
  lwpr::LimitTree t;
  for (auto _ : state) {
    lwpr::sample_gw_limit(law(), biased, N, rng, t);
    benchmark::DoNotOptimize(lwpr::root_pagerank(t, 0.85, N));
  }
}
BENCHMARK(BM_GwLimitRootScore)->Arg(5)->Arg(10);

void BM_FixedPoint(benchmark::State& state) {
  lwpr::FixedPointParams p;
  p.law = law();
  p.M = static_cast<std::size_t>(state.range(0));
  const lwpr::RngStream rng(7, lwpr::streams::kLimits);
  for (auto _ : state) benchmark::DoNotOptimize(lwpr::solve_fixed_point_mc(p, rng).data());
}
BENCHMARK(BM_FixedPoint)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
