#include "qresp/optimizer.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qresp/error.h"
#include "qresp/taxonomy.h"

namespace qresp {
namespace {

using Clock = std::chrono::steady_clock;

std::size_t PopCount(std::span<const std::uint64_t> words) {
  std::size_t n = 0;
  for (std::uint64_t w : words) n += std::popcount(w);
  return n;
}

void CheckK(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kDomain, "refinement set size k must be >= 1");
}

// Positions below refer to candidates re-ordered by descending answer count
// (ties by name), which is the branching order.
class BranchAndBound {
 public:
  BranchAndBound(const IlpModel& model, std::span<const std::size_t> name_rank,
                 const SolveOptions& options, Clock::time_point start)
      : model_(model),
        options_(options),
        k_(model.k()),
        cand_(model.candidate_count()),
        n_(static_cast<std::int64_t>(model.n())),
        words_(model.words()),
        start_(start) {
    order_.resize(cand_);
    for (std::size_t i = 0; i < cand_; ++i) order_[i] = i;
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (model.answer_count(a) != model.answer_count(b)) {
        return model.answer_count(a) > model.answer_count(b);
      }
      return name_rank[a] < name_rank[b];
    });
    size_.resize(cand_);
    rank_.resize(cand_);
    for (std::size_t p = 0; p < cand_; ++p) {
      size_[p] = static_cast<std::int64_t>(model.answer_count(order_[p]));
      rank_[p] = name_rank[order_[p]];
    }
    suffix_union_.assign((cand_ + 1) * words_, 0);
    for (std::size_t p = cand_; p-- > 0;) {
      auto col = model.column(order_[p]);
      for (std::size_t w = 0; w < words_; ++w) {
        suffix_union_[p * words_ + w] = suffix_union_[(p + 1) * words_ + w] | col[w];
      }
    }
    tail_sum_.assign(k_ + 1, 0);
    for (std::size_t r = 1; r <= k_; ++r) tail_sum_[r] = tail_sum_[r - 1] + size_[cand_ - r];
  }

  // Greedy construction used as the first incumbent: repeatedly add the
  // candidate giving the lowest cost of the partial selection.
  void Greedy() {
    std::vector<std::uint64_t> uni(words_, 0), trial(words_);
    std::vector<bool> taken(cand_, false);
    std::vector<std::uint32_t> members;
    std::int64_t sum = 0;
    std::int64_t min = std::numeric_limits<std::int64_t>::max();
    for (std::size_t step = 0; step < k_; ++step) {
      std::size_t best_p = cand_;
      std::int64_t best_cost = 0;
      for (std::size_t p = 0; p < cand_; ++p) {
        if (taken[p]) continue;
        auto col = model_.column(order_[p]);
        std::size_t covered = 0;
        for (std::size_t w = 0; w < words_; ++w) covered += std::popcount(uni[w] | col[w]);
        const std::int64_t cost = PartialCost(sum + size_[p], std::min(min, size_[p]), covered);
        if (best_p == cand_ || cost < best_cost ||
            (cost == best_cost && rank_[p] < rank_[best_p])) {
          best_p = p;
          best_cost = cost;
        }
      }
      taken[best_p] = true;
      members.push_back(static_cast<std::uint32_t>(best_p));
      auto col = model_.column(order_[best_p]);
      for (std::size_t w = 0; w < words_; ++w) uni[w] |= col[w];
      sum += size_[best_p];
      min = std::min(min, size_[best_p]);
    }
    std::sort(members.begin(), members.end());
    Offer(members, PartialCost(sum, min, PopCount(uni)));
  }

  // Returns true when the tree was exhausted, false when a limit stopped it.
  bool Search() {
    if (options_.budget.count() <= 0) return false;
    deadline_ = start_ + options_.budget;
    frontier_.push(Node{std::numeric_limits<std::int64_t>::min(), 0, seq_++, {}});
    while (!frontier_.empty()) {
      if (OutOfBudget()) return false;
      Node node = frontier_.top();
      frontier_.pop();
      if (has_incumbent_ && node.bound > incumbent_cost_) break;
      if (Prunable(node)) continue;
      if (frontier_.size() >= options_.frontier_limit) {
        if (!Dive(std::move(node))) return false;
      } else {
        for (Node& child : Expand(node)) frontier_.push(std::move(child));
        if (stopped_) return false;
      }
    }
    return true;
  }

  std::uint64_t nodes() const { return nodes_; }
  std::int64_t incumbent_cost() const { return incumbent_cost_; }
  std::vector<TypeId> IncumbentTypes() const {
    std::vector<TypeId> out;
    for (std::uint32_t p : incumbent_) out.push_back(model_.candidates()[order_[p]]);
    return out;
  }

 private:
  struct Node {
    std::int64_t bound;
    std::uint32_t depth;
    std::uint64_t seq;
    std::vector<std::uint32_t> members;  // ascending positions
  };
  // Lowest bound first, then deepest, then oldest.
  struct NodeAfter {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      if (a.depth != b.depth) return a.depth < b.depth;
      return a.seq > b.seq;
    }
  };

  // Cost of a selection from its size sum, its smallest member and how many
  // entities it covers. Since sum_j c_j = sum_i n_i,
  //   sum_j |c_j - 1| = sum_{c_j >= 1} (c_j - 1) + #{c_j = 0}
  //                   = sum_i n_i - covered + (n - covered).
  std::int64_t PartialCost(std::int64_t sum, std::int64_t min,
                           std::size_t covered) const {
    const auto cov = static_cast<std::int64_t>(covered);
    return sum - cov + (n_ - cov) - min;
  }

  bool OutOfBudget() {
    if (options_.node_limit && nodes_ >= *options_.node_limit) return stopped_ = true;
    if ((++ticks_ & 63) == 0 && Clock::now() >= deadline_) return stopped_ = true;
    return stopped_;
  }

  std::vector<std::size_t> SortedRanks(std::span<const std::uint32_t> members) const {
    std::vector<std::size_t> ranks;
    ranks.reserve(members.size());
    for (std::uint32_t p : members) ranks.push_back(rank_[p]);
    std::sort(ranks.begin(), ranks.end());
    return ranks;
  }

  void Offer(std::span<const std::uint32_t> members, std::int64_t cost) {
    std::vector<std::size_t> ranks = SortedRanks(members);
    if (has_incumbent_ &&
        (cost > incumbent_cost_ || (cost == incumbent_cost_ && ranks >= incumbent_ranks_))) {
      return;
    }
    has_incumbent_ = true;
    incumbent_cost_ = cost;
    incumbent_ranks_ = std::move(ranks);
    incumbent_.assign(members.begin(), members.end());
  }

  // A node survives only if some completion could beat the incumbent on cost,
  // or tie it while using a lexicographically smaller name tuple.
  bool Prunable(const Node& node) const {
    if (!has_incumbent_ || node.bound < incumbent_cost_) return false;
    if (node.bound > incumbent_cost_) return true;
    // Smallest achievable tuple: the node's members plus the lowest-ranked
    // names still selectable after its last position.
    const std::size_t remaining = k_ - node.members.size();
    const std::size_t first = node.members.empty() ? 0 : node.members.back() + 1;
    std::vector<std::size_t> free_ranks(rank_.begin() + first, rank_.end());
    std::partial_sort(free_ranks.begin(), free_ranks.begin() + remaining, free_ranks.end());
    std::vector<std::size_t> best = SortedRanks(node.members);
    best.insert(best.end(), free_ranks.begin(), free_ranks.begin() + remaining);
    std::sort(best.begin(), best.end());
    return best >= incumbent_ranks_;
  }

  // Children of `node` that are still open. Complete selections are scored on
  // the spot and offered as incumbents instead of being returned.
  //
  // Lower bound for a partial selection S whose remaining r members must come
  // from the positions F after its last one. Let R = S ∪ A be any completion,
  // A ⊆ F, |A| = r. Coverage counts only grow as members are added, and an
  // entity covered by neither S nor F stays at c_j = 0 in R. So with
  // z = #entities outside ∪S ∪ ∪F:
  //   t1(R) >= sum_{c_j(S) >= 2} (c_j(S) - 1) + z = sum_S n_i - |∪S| + z,
  //   t2(R) <= min(min_S n_i, max_F n_i),
  // which gives bound_a = (sum_S n_i - |∪S| + z) - min(min_S n_i, max_F n_i).
  // Second route: cost(R) = sum_R n_i - min_R n_i - n + 2 z(R) (see
  // PartialCost), z(R) >= z, and sum - min is non-decreasing in every member
  // size, so replacing A by the r smallest sizes in F (always the last r
  // positions, because F is a suffix of a size-descending order) cannot raise
  // it. That gives bound_b. Both are admissible, so max(bound_a, bound_b) is.
  std::vector<Node> Expand(const Node& node) {
    std::vector<std::uint64_t> base(words_, 0);
    std::int64_t sum = 0;
    std::int64_t min = std::numeric_limits<std::int64_t>::max();
    for (std::uint32_t p : node.members) {
      auto col = model_.column(order_[p]);
      for (std::size_t w = 0; w < words_; ++w) base[w] |= col[w];
      sum += size_[p];
      min = std::min(min, size_[p]);
    }
    const std::size_t depth = node.members.size();
    const std::size_t remaining_after = k_ - depth - 1;
    const std::size_t first = node.members.empty() ? 0 : node.members.back() + 1;
    const std::size_t last = cand_ - (k_ - depth);  // inclusive

    std::vector<Node> children;
    std::vector<std::uint64_t> uni(words_);
    for (std::size_t j = first; j <= last; ++j) {
      if (OutOfBudget()) break;
      ++nodes_;
      auto col = model_.column(order_[j]);
      std::size_t covered = 0;
      for (std::size_t w = 0; w < words_; ++w) {
        uni[w] = base[w] | col[w];
        covered += std::popcount(uni[w]);
      }
      const std::int64_t child_sum = sum + size_[j];
      const std::int64_t child_min = std::min(min, size_[j]);
      std::vector<std::uint32_t> members = node.members;
      members.push_back(static_cast<std::uint32_t>(j));
      if (remaining_after == 0) {
        Offer(members, PartialCost(child_sum, child_min, covered));
        continue;
      }
      const std::uint64_t* rest = &suffix_union_[(j + 1) * words_];
      std::size_t reach = 0;
      for (std::size_t w = 0; w < words_; ++w) reach += std::popcount(uni[w] | rest[w]);
      const std::int64_t z = n_ - static_cast<std::int64_t>(reach);
      const auto cov = static_cast<std::int64_t>(covered);
      const std::int64_t bound_a = (child_sum - cov + z) - std::min(child_min, size_[j + 1]);
      const std::int64_t bound_b = child_sum + tail_sum_[remaining_after] -
                                   std::min(child_min, size_[cand_ - 1]) - n_ + 2 * z;
      Node child{std::max(bound_a, bound_b), static_cast<std::uint32_t>(depth + 1), seq_++,
                 std::move(members)};
      if (!Prunable(child)) children.push_back(std::move(child));
    }
    return children;
  }

  // Depth-first completion of one subtree, best bound first among siblings.
  bool Dive(Node root) {
    std::vector<Node> stack;
    stack.push_back(std::move(root));
    while (!stack.empty()) {
      if (OutOfBudget()) return false;
      Node node = std::move(stack.back());
      stack.pop_back();
      if (Prunable(node)) continue;
      std::vector<Node> children = Expand(node);
      if (stopped_) return false;
      std::sort(children.begin(), children.end(), NodeAfter{});  // worst first
      for (Node& c : children) stack.push_back(std::move(c));
    }
    return true;
  }

  const IlpModel& model_;
  const SolveOptions& options_;
  const std::size_t k_;
  const std::size_t cand_;
  const std::int64_t n_;
  const std::size_t words_;
  const Clock::time_point start_;
  Clock::time_point deadline_;

  std::vector<std::size_t> order_;
  std::vector<std::int64_t> size_;
  std::vector<std::size_t> rank_;
  std::vector<std::uint64_t> suffix_union_;
  std::vector<std::int64_t> tail_sum_;

  std::priority_queue<Node, std::vector<Node>, NodeAfter> frontier_;
  std::uint64_t seq_ = 0;
  std::uint64_t nodes_ = 0;
  std::uint64_t ticks_ = 0;
  bool stopped_ = false;

  bool has_incumbent_ = false;
  std::int64_t incumbent_cost_ = 0;
  std::vector<std::size_t> incumbent_ranks_;
  std::vector<std::uint32_t> incumbent_;
};

std::vector<std::size_t> NameRanks(const Taxonomy& taxonomy,
                                   std::span<const TypeId> candidates) {
  std::vector<std::size_t> idx(candidates.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return taxonomy.TypeName(candidates[a]) < taxonomy.TypeName(candidates[b]);
  });
  std::vector<std::size_t> rank(candidates.size());
  for (std::size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = r;
  return rank;
}

SolveResult Finish(const Taxonomy& taxonomy, TypeId query,
                   std::vector<TypeId> members, SolveStatus status,
                   std::uint64_t nodes, Clock::time_point start) {
  SolveResult result;
  result.best = RefinementSet::Make(taxonomy, query, std::move(members));
  result.cost = Score(taxonomy, *result.best);
  result.status = status;
  result.nodes_explored = nodes;
  result.elapsed =
      std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
  return result;
}

SolveResult Infeasible(Clock::time_point start) {
  SolveResult result;
  result.status = SolveStatus::kInfeasible;
  result.elapsed =
      std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
  return result;
}

}  // namespace

RefinementSet RefinementSet::Make(const Taxonomy& taxonomy, TypeId query,
                                  std::vector<TypeId> members) {
  std::sort(members.begin(), members.end(), [&](TypeId a, TypeId b) {
    return taxonomy.TypeName(a) < taxonomy.TypeName(b);
  });
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw Error(ErrorCode::kDomain, "refinement set members must be distinct");
  }
  return RefinementSet{query, std::move(members)};
}

std::vector<std::string> RefinementSet::MemberNames(const Taxonomy& taxonomy) const {
  std::vector<std::string> names;
  names.reserve(members.size());
  for (TypeId t : members) names.push_back(taxonomy.TypeName(t));
  return names;
}

CostBreakdown ScoreAnswerSets(const EntitySet& query_answers,
                              std::span<const EntitySet> member_answers) {
  CostBreakdown out;
  out.n = query_answers.size();
  out.k = member_answers.size();
  for (const EntitySet& member : member_answers) {
    EntitySet inside = member & query_answers;
    out.outside_query_entities += member.size() - inside.size();
    out.per_refinement_counts.push_back(inside.size());
    out.member_answers.push_back(std::move(inside));
  }
  out.coverage_counts.reserve(out.n);
  query_answers.ForEach([&](EntityId e) {
    int c = 0;
    for (const EntitySet& row : out.member_answers) c += row.contains(e);
    out.coverage_counts.push_back(c);
    out.coverage_penalty += std::abs(c - 1);
  });
  if (!out.per_refinement_counts.empty()) {
    out.min_coverage = static_cast<std::int64_t>(*std::min_element(
        out.per_refinement_counts.begin(), out.per_refinement_counts.end()));
  }
  out.total = out.coverage_penalty - out.min_coverage;
  return out;
}

CostBreakdown Score(const Taxonomy& taxonomy, const RefinementSet& rs) {
  std::vector<EntitySet> members;
  members.reserve(rs.members.size());
  for (TypeId m : rs.members) {
    if (!taxonomy.IsStrictDescendant(m, rs.query)) {
      throw Error(ErrorCode::kContract, "'" + taxonomy.TypeName(m) +
                                            "' is not a subtype of '" +
                                            taxonomy.TypeName(rs.query) + "'");
    }
    members.push_back(taxonomy.Answers(m));
  }
  return ScoreAnswerSets(taxonomy.Answers(rs.query), members);
}

IlpModel IlpModel::Build(const Taxonomy& taxonomy, TypeId query,
                         std::span<const TypeId> candidates, std::size_t k) {
  IlpModel model;
  model.query_ = query;
  model.k_ = k;
  const EntitySet& answers = taxonomy.Answers(query);
  const std::vector<EntityId> entities = answers.ToVector();
  model.n_ = entities.size();
  model.words_ = (model.n_ + 63) / 64;
  model.candidates_.assign(candidates.begin(), candidates.end());
  model.columns_.assign(model.candidates_.size() * model.words_, 0);
  model.sizes_.assign(model.candidates_.size(), 0);
  for (std::size_t i = 0; i < model.candidates_.size(); ++i) {
    std::uint64_t* col = &model.columns_[i * model.words_];
    std::size_t count = 0;
    taxonomy.Answers(model.candidates_[i]).ForEach([&](EntityId e) {
      auto it = std::lower_bound(entities.begin(), entities.end(), e);
      if (it == entities.end() || *it != e) {
        ++model.outside_;
        return;
      }
      const auto j = static_cast<std::size_t>(it - entities.begin());
      col[j >> 6] |= std::uint64_t{1} << (j & 63);
      ++count;
    });
    model.sizes_[i] = count;
    model.n_max_ = std::max(model.n_max_, count);
  }
  return model;
}

std::vector<int> IlpModel::Coverage(std::span<const std::uint8_t> x) const {
  std::vector<int> c(n_, 0);
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (!x[i]) continue;
    for (std::size_t j = 0; j < n_; ++j) c[j] += covers(i, j);
  }
  return c;
}

bool IlpModel::IsFeasible(std::span<const std::uint8_t> x, std::span<const double> y,
                          double xi) const {
  constexpr double kTol = 1e-9;
  if (x.size() != candidates_.size() || y.size() != n_) return false;
  std::size_t selected = 0;
  for (std::uint8_t v : x) {
    if (v > 1) return false;
    selected += v;
  }
  if (selected != k_) return false;
  const std::vector<int> c = Coverage(x);
  for (std::size_t j = 0; j < n_; ++j) {
    if (y[j] + kTol < c[j] - 1.0 || y[j] + kTol < 1.0 - c[j]) return false;
  }
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    const double cap = (1.0 - x[i]) * static_cast<double>(n_max_) +
                       x[i] * static_cast<double>(sizes_[i]);
    if (xi > cap + kTol) return false;
  }
  return true;
}

double IlpModel::Objective(std::span<const double> y, double xi) const {
  double sum = 0;
  for (double v : y) sum += v;
  return sum - xi;
}

std::int64_t IlpModel::OptimalObjective(std::span<const std::uint8_t> x) const {
  const std::vector<int> c = Coverage(x);
  std::int64_t t1 = 0;
  for (int v : c) t1 += std::abs(v - 1);
  auto xi = static_cast<std::int64_t>(n_max_);
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (x[i]) xi = std::min(xi, static_cast<std::int64_t>(sizes_[i]));
  }
  return t1 - xi;
}

std::string_view SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kBudgetExceeded: return "budget-exceeded";
    case SolveStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

SolveResult Solve(const Taxonomy& taxonomy, const CandidatePool& pool,
                  std::size_t k, const SolveOptions& options) {
  const auto start = Clock::now();
  CheckK(k);
  if (pool.kept.size() < k) return Infeasible(start);
  const IlpModel model = IlpModel::Build(taxonomy, pool.query, pool.kept, k);
  const std::vector<std::size_t> ranks = NameRanks(taxonomy, pool.kept);
  BranchAndBound search(model, ranks, options, start);
  search.Greedy();
  const bool exhausted = search.Search();
  SolveResult result =
      Finish(taxonomy, pool.query, search.IncumbentTypes(),
             exhausted ? SolveStatus::kOptimal : SolveStatus::kBudgetExceeded,
             search.nodes(), start);
  if (result.cost->total != search.incumbent_cost()) {
    throw std::logic_error("solver cost disagrees with rescoring");
  }
  return result;
}

__extension__ typedef unsigned __int128 Uint128;

std::uint64_t BinomialSaturating(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  Uint128 acc = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    acc = acc * (n - i) / (i + 1);
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(acc);
}

SolveResult SolveExhaustive(const Taxonomy& taxonomy, const CandidatePool& pool,
                            std::size_t k, std::uint64_t cap) {
  const auto start = Clock::now();
  CheckK(k);
  if (pool.kept.size() < k) return Infeasible(start);
  const std::uint64_t space = BinomialSaturating(pool.kept.size(), k);
  if (space > cap) {
    throw Error(ErrorCode::kInstanceSize,
                "C(" + std::to_string(pool.kept.size()) + ", " + std::to_string(k) +
                    ") subsets exceed the exhaustive cap of " + std::to_string(cap));
  }

  // Candidates in name order, so the first minimum met in lexicographic
  // combination order is the tie-break winner.
  std::vector<TypeId> cands = pool.kept;
  std::sort(cands.begin(), cands.end(), [&](TypeId a, TypeId b) {
    return taxonomy.TypeName(a) < taxonomy.TypeName(b);
  });
  const IlpModel model = IlpModel::Build(taxonomy, pool.query, cands, k);
  const std::size_t n = model.n();
  std::vector<std::vector<std::uint32_t>> rows(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (model.covers(i, j)) rows[i].push_back(static_cast<std::uint32_t>(j));
    }
  }

  std::vector<std::size_t> combo(k);
  for (std::size_t i = 0; i < k; ++i) combo[i] = i;
  std::vector<int> counts(n);
  std::vector<std::size_t> best;
  std::int64_t best_cost = 0;
  std::uint64_t visited = 0;
  for (;;) {
    ++visited;
    std::fill(counts.begin(), counts.end(), 0);
    std::size_t min_rows = std::numeric_limits<std::size_t>::max();
    for (std::size_t i : combo) {
      for (std::uint32_t j : rows[i]) ++counts[j];
      min_rows = std::min(min_rows, rows[i].size());
    }
    std::int64_t t1 = 0;
    for (int c : counts) t1 += std::abs(c - 1);
    const std::int64_t cost = t1 - static_cast<std::int64_t>(min_rows);
    if (best.empty() || cost < best_cost) {
      best = combo;
      best_cost = cost;
    }
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && combo[i - 1] == cands.size() - k + (i - 1)) --i;
    if (i == 0) break;
    ++combo[i - 1];
    for (std::size_t t = i; t < k; ++t) combo[t] = combo[t - 1] + 1;
  }

  std::vector<TypeId> members;
  for (std::size_t i : best) members.push_back(cands[i]);
  return Finish(taxonomy, pool.query, std::move(members), SolveStatus::kOptimal,
                visited, start);
}

std::string SolveResultLine(const Taxonomy& taxonomy, TypeId query,
                            const SolveResult& result, bool with_timing) {
  nlohmann::ordered_json rec;
  rec["query"] = taxonomy.TypeName(query);
  rec["members"] = result.best ? result.best->MemberNames(taxonomy)
                               : std::vector<std::string>{};
  if (result.cost) {
    rec["t1"] = result.cost->coverage_penalty;
    rec["t2"] = result.cost->min_coverage;
    rec["total"] = result.cost->total;
  } else {
    rec["t1"] = nullptr;
    rec["t2"] = nullptr;
    rec["total"] = nullptr;
  }
  rec["status"] = SolveStatusName(result.status);
  rec["nodes"] = result.nodes_explored;
  if (with_timing) {
    rec["millis"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(result.elapsed).count();
  }
  return rec.dump();
}

}  // namespace qresp
