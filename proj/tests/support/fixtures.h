#ifndef QRESP_TESTS_SUPPORT_FIXTURES_H_
#define QRESP_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qresp/taxonomy.h"

namespace qresp::testing {

std::string DataPath(const std::string& name);

// The 100-film "Action films" hierarchy under tests/data.
Taxonomy LoadActionFilms();

Taxonomy Build(const std::vector<std::pair<std::string, std::string>>& edges,
               const std::vector<std::pair<std::string, std::string>>& instances);

// Root "Q" with entities e00..e(n-1) and candidate subtypes C00..C(K-1).
// `answers[i]` lists the entity indices of candidate i.
Taxonomy FlatInstance(std::size_t n, const std::vector<std::vector<int>>& answers);

struct RandomFlatSpec {
  std::size_t n = 12;
  std::size_t candidates = 8;
  // Chance that a candidate contains a given entity.
  double density = 0.3;
  // Plant an ideal partition into `plant_k` blocks among the candidates.
  std::size_t plant_k = 0;
};

// Candidate answer lists for FlatInstance.
std::vector<std::vector<int>> RandomAnswers(std::mt19937_64& rng, const RandomFlatSpec& spec);

// Balanced tree: root "N" over k^depth entities; node "N.a.b" splits its
// answers into k equal children. Every internal node also has two unfiltered
// distractor children (a child block plus one entity of the next block) and
// one "1990s ..." child removed by the default filters.
Taxonomy BalancedTree(std::size_t k, std::size_t depth);

// A multi-topic corpus for pipeline tests. Topic "Topic NN" holds 40-80
// entities and 8-12 subtypes "Topic NN kind MM" of random density, some with
// children of their own, plus two subtypes the default filters remove.
Taxonomy SyntheticCorpus(std::uint64_t seed, std::size_t topics);

// Exhaustive minimum of the cost over all k-subsets, counted directly.
struct BruteForceResult {
  std::int64_t cost = 0;
  std::vector<std::size_t> best;  // candidate indices, lexicographically first
};
BruteForceResult BruteForceMin(std::size_t n, const std::vector<std::vector<int>>& answers,
                               std::size_t k);
std::int64_t DirectCost(std::size_t n, const std::vector<std::vector<int>>& answers,
                        const std::vector<std::size_t>& chosen);

// True iff some k candidates are pairwise disjoint, equal sized and cover all
// n entities.
bool HasIdealPartition(std::size_t n, const std::vector<std::vector<int>>& answers,
                       std::size_t k);

std::string ReadFile(const std::string& path);
std::string TempPath(const std::string& stem);

}  // namespace qresp::testing

#endif  // QRESP_TESTS_SUPPORT_FIXTURES_H_
