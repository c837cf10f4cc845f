#ifndef QRESP_OPTIMIZER_H_
#define QRESP_OPTIMIZER_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qresp/candidate_filter.h"
#include "qresp/entity_set.h"
#include "qresp/ids.h"

namespace qresp {

class Taxonomy;

// A size-k selection of refinements for one query. Members are distinct and
// kept in canonical order: ascending by type name.
struct RefinementSet {
  TypeId query;
  std::vector<TypeId> members;

  // Sorts `members` by name. Throws Error(kDomain) on duplicates.
  static RefinementSet Make(const Taxonomy& taxonomy, TypeId query,
                            std::vector<TypeId> members);

  std::vector<std::string> MemberNames(const Taxonomy& taxonomy) const;
  friend bool operator==(const RefinementSet&, const RefinementSet&) = default;
};

// The two terms of the refinement-set cost and what they are made of.
//
//   coverage_penalty  t1 = sum_j |c_j - 1|   over the n entities of A(q)
//   min_coverage      t2 = min_i n_i         over the k members
//   total                = t1 - t2
//
// c_j counts the members answering entity j; n_i = |A(member i) ∩ A(q)|.
struct CostBreakdown {
  std::size_t n = 0;
  std::size_t k = 0;
  // c_j for the entities of A(q) in ascending EntityId order.
  std::vector<int> coverage_counts;
  // n_i in member order.
  std::vector<std::size_t> per_refinement_counts;
  // Row i of the membership matrix: A(member i) ∩ A(q).
  std::vector<EntitySet> member_answers;
  std::int64_t coverage_penalty = 0;
  std::int64_t min_coverage = 0;
  std::int64_t total = 0;
  // Member answers falling outside A(q). Zero whenever members really are
  // subtypes of the query.
  std::size_t outside_query_entities = 0;
};

// Throws Error(kContract) if a member is not a strict descendant of the query.
CostBreakdown Score(const Taxonomy& taxonomy, const RefinementSet& rs);

// The same cost over explicit answer sets, e.g. predicted ones. Member
// answers outside `query_answers` are ignored and counted.
CostBreakdown ScoreAnswerSets(const EntitySet& query_answers,
                              std::span<const EntitySet> member_answers);

// The selection problem as an integer program over one binary x_i per
// candidate:
//
//   min  sum_j y_j - xi
//   s.t. y_j >= c_j - 1,  y_j >= 1 - c_j          for every entity j
//        c_j  = sum_i x_i a_ij
//        sum_i x_i = k
//        xi  <= (1 - x_i) n_max + x_i n_i          for every candidate i
//
// Entities are re-indexed 0..n-1 over A(q); column i is the bitmap of
// A(candidate i) ∩ A(q).
class IlpModel {
 public:
  static IlpModel Build(const Taxonomy& taxonomy, TypeId query,
                        std::span<const TypeId> candidates, std::size_t k);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t candidate_count() const { return candidates_.size(); }
  std::span<const TypeId> candidates() const { return candidates_; }
  std::size_t answer_count(std::size_t i) const { return sizes_[i]; }
  std::size_t n_max() const { return n_max_; }
  std::size_t words() const { return words_; }
  std::span<const std::uint64_t> column(std::size_t i) const {
    return {columns_.data() + i * words_, words_};
  }
  bool covers(std::size_t i, std::size_t j) const {
    return (column(i)[j >> 6] >> (j & 63)) & 1U;
  }
  std::size_t outside_query_entities() const { return outside_; }

  // c_j under selection `x` (one 0/1 entry per candidate).
  std::vector<int> Coverage(std::span<const std::uint8_t> x) const;

  // Checks every constraint for a full assignment.
  bool IsFeasible(std::span<const std::uint8_t> x, std::span<const double> y,
                  double xi) const;
  double Objective(std::span<const double> y, double xi) const;

  // Objective at the best continuous completion of `x`: y_j = |c_j - 1| and
  // xi at its upper limit. Requires sum x = k >= 1.
  std::int64_t OptimalObjective(std::span<const std::uint8_t> x) const;

 private:
  TypeId query_;
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::size_t words_ = 0;
  std::size_t n_max_ = 0;
  std::size_t outside_ = 0;
  std::vector<TypeId> candidates_;
  std::vector<std::size_t> sizes_;
  std::vector<std::uint64_t> columns_;
};

enum class SolveStatus { kOptimal, kBudgetExceeded, kInfeasible };

std::string_view SolveStatusName(SolveStatus status);

struct SolveOptions {
  std::chrono::milliseconds budget{5000};
  // Stops after this many nodes regardless of time. Node counts, unlike wall
  // time, make a truncated search reproducible.
  std::optional<std::uint64_t> node_limit;
  // Past this many open nodes the search stops growing the best-first frontier
  // and finishes each popped subtree depth-first.
  std::size_t frontier_limit = std::size_t{1} << 20;
};

struct SolveResult {
  std::optional<RefinementSet> best;
  std::optional<CostBreakdown> cost;
  SolveStatus status = SolveStatus::kInfeasible;
  std::uint64_t nodes_explored = 0;
  std::chrono::microseconds elapsed{0};
};

// Minimum-cost size-k subset of `pool.kept` by best-first branch and bound.
// Equal-cost optima resolve to the lexicographically smallest member-name
// tuple. Status is optimal only when the search finished inside the budget;
// otherwise the best incumbent (at worst the greedy start) comes back with
// status budget-exceeded. Fewer than k kept candidates give infeasible.
SolveResult Solve(const Taxonomy& taxonomy, const CandidatePool& pool,
                  std::size_t k, const SolveOptions& options = {});

inline constexpr std::uint64_t kDefaultExhaustiveCap = 20'000'000;

// Scores every size-k subset of `pool.kept`. Same tie-break as Solve. Throws
// Error(kInstanceSize) when C(K, k) exceeds `cap`.
SolveResult SolveExhaustive(const Taxonomy& taxonomy, const CandidatePool& pool,
                            std::size_t k,
                            std::uint64_t cap = kDefaultExhaustiveCap);

// C(n, r), saturating at UINT64_MAX.
std::uint64_t BinomialSaturating(std::uint64_t n, std::uint64_t r);

// {query, members, t1, t2, total, status, nodes} as one JSON line, plus
// millis when asked for. Leaving timing out keeps the line reproducible.
std::string SolveResultLine(const Taxonomy& taxonomy, TypeId query,
                            const SolveResult& result, bool with_timing = false);

}  // namespace qresp

#endif  // QRESP_OPTIMIZER_H_
