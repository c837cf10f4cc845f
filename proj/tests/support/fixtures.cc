#include "fixtures.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <unistd.h>

namespace qresp::testing {

std::string DataPath(const std::string& name) {
  return std::string(QRESP_TEST_DATA_DIR) + "/" + name;
}

Taxonomy LoadActionFilms() {
  std::ifstream edges(DataPath("action_films_edges.tsv"));
  std::ifstream instances(DataPath("action_films_instances.tsv"));
  return Taxonomy::Load(edges, instances);
}

Taxonomy Build(const std::vector<std::pair<std::string, std::string>>& edges,
               const std::vector<std::pair<std::string, std::string>>& instances) {
  TaxonomyBuilder b;
  for (const auto& [c, p] : edges) b.AddEdge(c, p);
  for (const auto& [e, t] : instances) b.AddInstance(e, t);
  return std::move(b).Build();
}

namespace {

std::string Entity(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "e%02d", i);
  return buf;
}

std::string Candidate(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "C%02zu", i);
  return buf;
}

}  // namespace

Taxonomy FlatInstance(std::size_t n, const std::vector<std::vector<int>>& answers) {
  TaxonomyBuilder b;
  b.InternType("Q");
  for (std::size_t j = 0; j < n; ++j) b.AddInstance(Entity(static_cast<int>(j)), "Q");
  for (std::size_t i = 0; i < answers.size(); ++i) {
    b.AddEdge(Candidate(i), "Q");
    for (int e : answers[i]) b.AddInstance(Entity(e), Candidate(i));
  }
  return std::move(b).Build();
}

std::vector<std::vector<int>> RandomAnswers(std::mt19937_64& rng, const RandomFlatSpec& spec) {
  std::vector<std::vector<int>> answers(spec.candidates);
  std::bernoulli_distribution pick(spec.density);
  for (auto& a : answers) {
    for (std::size_t j = 0; j < spec.n; ++j) {
      if (pick(rng)) a.push_back(static_cast<int>(j));
    }
  }
  if (spec.plant_k > 0 && spec.plant_k <= spec.candidates && spec.n % spec.plant_k == 0) {
    std::vector<int> perm(spec.n);
    for (std::size_t j = 0; j < spec.n; ++j) perm[j] = static_cast<int>(j);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> slots(spec.candidates);
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
    std::shuffle(slots.begin(), slots.end(), rng);
    const std::size_t block = spec.n / spec.plant_k;
    for (std::size_t b = 0; b < spec.plant_k; ++b) {
      std::vector<int> part(perm.begin() + b * block, perm.begin() + (b + 1) * block);
      std::sort(part.begin(), part.end());
      answers[slots[b]] = part;
    }
  }
  return answers;
}

Taxonomy BalancedTree(std::size_t k, std::size_t depth) {
  std::size_t total = 1;
  for (std::size_t d = 0; d < depth; ++d) total *= k;
  TaxonomyBuilder b;
  b.InternType("N");
  auto entity = [](std::size_t j) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "x%03zu", j);
    return std::string(buf);
  };
  std::function<void(const std::string&, std::size_t, std::size_t)> grow =
      [&](const std::string& node, std::size_t lo, std::size_t size) {
        if (size == 1) {
          b.AddInstance(entity(lo), node);
          return;
        }
        const std::size_t block = size / k;
        for (std::size_t c = 0; c < k; ++c) {
          const std::string child = node + "." + std::to_string(c + 1);
          b.AddEdge(child, node);
          grow(child, lo + c * block, block);
        }
        for (std::size_t d = 0; d < 2 && d + 1 < k; ++d) {
          const std::string distractor = node + " extra " + std::to_string(d + 1);
          b.AddEdge(distractor, node);
          for (std::size_t j = 0; j < block; ++j) b.AddInstance(entity(lo + d * block + j), distractor);
          b.AddInstance(entity(lo + (d + 1) * block), distractor);
        }
        const std::string dated = "1990s " + node;
        b.AddEdge(dated, node);
        for (std::size_t j = 0; j < block; ++j) b.AddInstance(entity(lo + j), dated);
      };
  grow("N", 0, total);
  return std::move(b).Build();
}

Taxonomy SyntheticCorpus(std::uint64_t seed, std::size_t topics) {
  std::mt19937_64 rng(seed);
  TaxonomyBuilder b;
  auto uniform = [&](std::size_t lo, std::size_t hi) { return lo + rng() % (hi - lo + 1); };
  for (std::size_t i = 0; i < topics; ++i) {
    char topic[32];
    std::snprintf(topic, sizeof(topic), "Topic %02zu", i);
    const std::size_t entities = uniform(40, 80);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < entities; ++j) {
      names.push_back(std::string(topic) + " item " + std::to_string(j));
      b.AddInstance(names.back(), topic);
    }
    const std::size_t kinds = uniform(8, 12);
    for (std::size_t m = 0; m < kinds; ++m) {
      char kind[48];
      std::snprintf(kind, sizeof(kind), "%s kind %02zu", topic, m);
      b.AddEdge(kind, topic);
      std::bernoulli_distribution pick(0.1 + 0.3 * static_cast<double>(rng() % 100) / 100.0);
      std::vector<std::string> members;
      for (const auto& e : names) {
        if (pick(rng)) members.push_back(e);
      }
      for (const auto& e : members) b.AddInstance(e, kind);
      if (m % 4 == 0 && members.size() >= 6) {
        for (int c = 0; c < 3; ++c) {
          const std::string child = std::string(kind) + " part " + std::to_string(c);
          b.AddEdge(child, kind);
          for (std::size_t x = static_cast<std::size_t>(c); x < members.size(); x += 3) {
            b.AddInstance(members[x], child);
          }
        }
      }
    }
    const std::string dated = std::string("1990s ") + topic;
    const std::string gendered = std::string("Female ") + topic;
    b.AddEdge(dated, topic);
    b.AddEdge(gendered, topic);
    for (std::size_t j = 0; j < entities; j += 2) b.AddInstance(names[j], dated);
    for (std::size_t j = 1; j < entities; j += 2) b.AddInstance(names[j], gendered);
  }
  return std::move(b).Build();
}

std::int64_t DirectCost(std::size_t n, const std::vector<std::vector<int>>& answers,
                        const std::vector<std::size_t>& chosen) {
  std::vector<int> c(n, 0);
  std::int64_t min_n = -1;
  for (std::size_t i : chosen) {
    for (int e : answers[i]) ++c[static_cast<std::size_t>(e)];
    const auto size = static_cast<std::int64_t>(answers[i].size());
    if (min_n < 0 || size < min_n) min_n = size;
  }
  std::int64_t t1 = 0;
  for (int v : c) t1 += std::abs(v - 1);
  return t1 - std::max<std::int64_t>(min_n, 0);
}

BruteForceResult BruteForceMin(std::size_t n, const std::vector<std::vector<int>>& answers,
                               std::size_t k) {
  BruteForceResult best;
  bool have = false;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (chosen.size() == k) {
      const std::int64_t c = DirectCost(n, answers, chosen);
      if (!have || c < best.cost) {
        best.cost = c;
        best.best = chosen;
        have = true;
      }
      return;
    }
    for (std::size_t i = start; i < answers.size(); ++i) {
      chosen.push_back(i);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return best;
}

bool HasIdealPartition(std::size_t n, const std::vector<std::vector<int>>& answers,
                       std::size_t k) {
  if (k == 0 || n % k != 0) return false;
  const std::size_t block = n / k;
  std::vector<std::size_t> sized;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (answers[i].size() == block) sized.push_back(i);
  }
  std::vector<char> used(n, 0);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t taken) {
    if (taken == k) return true;
    for (std::size_t s = start; s < sized.size(); ++s) {
      const auto& a = answers[sized[s]];
      bool clash = false;
      for (int e : a) clash = clash || used[static_cast<std::size_t>(e)];
      if (clash) continue;
      for (int e : a) used[static_cast<std::size_t>(e)] = 1;
      const bool ok = rec(s + 1, taken + 1);
      for (int e : a) used[static_cast<std::size_t>(e)] = 0;
      if (ok) return true;
    }
    return false;
  };
  return rec(0, 0);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string TempPath(const std::string& stem) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("qresp-test-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return (dir / (stem + "-" + std::to_string(counter++))).string();
}

}  // namespace qresp::testing
