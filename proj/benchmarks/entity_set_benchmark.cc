#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "qresp/entity_set.h"

namespace qresp {
namespace {

EntitySet RandomSet(std::size_t universe, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution pick(density);
  std::vector<std::uint32_t> ids;
  for (std::uint32_t i = 0; i < universe; ++i) {
    if (pick(rng)) ids.push_back(i);
  }
  return EntitySet::FromSorted(universe, std::move(ids));
}

// range(0): universe, range(1): density in thousandths.
void BM_IntersectionCount(benchmark::State& state) {
  const auto universe = static_cast<std::size_t>(state.range(0));
  const double density = static_cast<double>(state.range(1)) / 1000.0;
  const EntitySet a = RandomSet(universe, density, 1);
  const EntitySet b = RandomSet(universe, density, 2);
  for (auto _ : state) benchmark::DoNotOptimize(a.IntersectionCount(b));
}
BENCHMARK(BM_IntersectionCount)->ArgsProduct({{1 << 12, 1 << 20}, {1, 50, 500}});

void BM_Union(benchmark::State& state) {
  const auto universe = static_cast<std::size_t>(state.range(0));
  const double density = static_cast<double>(state.range(1)) / 1000.0;
  const EntitySet a = RandomSet(universe, density, 3);
  const EntitySet b = RandomSet(universe, density, 4);
  for (auto _ : state) benchmark::DoNotOptimize((a | b).size());
}
BENCHMARK(BM_Union)->ArgsProduct({{1 << 12, 1 << 20}, {1, 50, 500}});

}  // namespace
}  // namespace qresp
