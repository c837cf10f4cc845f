#include <cstdio>
#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "qresp/candidate_filter.h"
#include "qresp/optimizer.h"
#include "qresp/taxonomy.h"

namespace qresp {
namespace {

// Root "Q" over n entities with K random candidates of mixed density, and k
// planted disjoint blocks so the optimum is ideal.
Taxonomy RandomInstance(std::size_t n, std::size_t candidates, std::size_t k,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TaxonomyBuilder b;
  std::vector<std::string> entities;
  for (std::size_t e = 0; e < n; ++e) {
    entities.push_back("e" + std::to_string(e));
    b.AddInstance(entities.back(), "Q");
  }
  char name[32];
  for (std::size_t c = 0; c < candidates; ++c) {
    std::snprintf(name, sizeof(name), "C%03zu", c);
    b.AddEdge(name, "Q");
    if (c < k) {
      for (std::size_t e = c; e < n; e += k) b.AddInstance(entities[e], name);
      continue;
    }
    std::bernoulli_distribution pick(0.05 + 0.4 * static_cast<double>(rng() % 100) / 100.0);
    for (const auto& e : entities) {
      if (pick(rng)) b.AddInstance(e, name);
    }
  }
  return std::move(b).Build();
}

void BM_Solve(benchmark::State& state) {
  const auto candidates = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const Taxonomy t = RandomInstance(500, candidates, k, 1);
  const CandidatePool pool = BuildCandidatePool(t, t.TypeOrThrow("Q"));
  SolveOptions options;
  options.budget = std::chrono::seconds(30);
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    const SolveResult r = Solve(t, pool, k, options);
    nodes = r.nodes_explored;
    benchmark::DoNotOptimize(r.cost);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_Solve)
    ->ArgsProduct({{20, 40, 80, 160}, {3, 5}})
    ->Unit(benchmark::kMillisecond);

void BM_SolveExhaustive(benchmark::State& state) {
  const auto candidates = static_cast<std::size_t>(state.range(0));
  const Taxonomy t = RandomInstance(500, candidates, 5, 1);
  const CandidatePool pool = BuildCandidatePool(t, t.TypeOrThrow("Q"));
  for (auto _ : state) benchmark::DoNotOptimize(SolveExhaustive(t, pool, 5).cost);
}
BENCHMARK(BM_SolveExhaustive)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_Score(benchmark::State& state) {
  const Taxonomy t = RandomInstance(static_cast<std::size_t>(state.range(0)), 40, 5, 2);
  const TypeId q = t.TypeOrThrow("Q");
  const CandidatePool pool = BuildCandidatePool(t, q);
  const RefinementSet rs = RefinementSet::Make(
      t, q, std::vector<TypeId>(pool.kept.begin(), pool.kept.begin() + 5));
  for (auto _ : state) benchmark::DoNotOptimize(Score(t, rs).total);
}
BENCHMARK(BM_Score)->Arg(100)->Arg(10000)->Arg(100000);

}  // namespace
}  // namespace qresp
