#ifndef QRESP_DISCOVERY_H_
#define QRESP_DISCOVERY_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qresp/candidate_filter.h"
#include "qresp/entity_set.h"
#include "qresp/ids.h"
#include "qresp/optimizer.h"

namespace qresp {

class Taxonomy;

struct DiscoveryOptions {
  std::size_t k = 5;
  // Nodes with at most this many answers are terminal and list their entities.
  std::size_t listing_threshold = 10;
  bool transitive_candidates = false;
  FilterConfig filters = FilterConfig::Default();
  SolveOptions solve = [] {
    SolveOptions o;
    o.budget = std::chrono::milliseconds(1000);
    return o;
  }();

  // Same settings, but only a single remaining answer ends a walk.
  static DiscoveryOptions ForSimulation(std::size_t k);
};

// What the explorer offers at one node.
struct NodeOffer {
  TypeId node;
  CandidatePool pool;
  // Empty at terminal nodes. Holds every kept candidate when fewer than k
  // survive filtering.
  std::optional<RefinementSet> offered;
  std::optional<CostBreakdown> cost;
  SolveStatus status = SolveStatus::kInfeasible;
  bool terminal = false;
};

struct DiscoveryStep {
  TypeId from;
  RefinementSet offered;
  TypeId chosen;
  std::size_t answer_count;  // |answers(chosen)|
};

// A drill-down walk through the taxonomy. Each step replaces the current
// query by one of the refinements offered for it, so the live answer set only
// ever shrinks. Offers are computed on first visit and cached per node, which
// makes going back to an earlier node free. Not thread-safe; callers serialize
// access per session.
class DiscoverySession {
 public:
  // Throws Error(kNotFound) for an unknown type.
  static DiscoverySession Start(const Taxonomy& taxonomy, TypeId query,
                                DiscoveryOptions options, std::string id = {});

  const std::string& id() const { return id_; }
  std::size_t k() const { return options_.k; }
  const DiscoveryOptions& options() const { return options_; }
  TypeId root() const { return root_; }
  TypeId current() const { return current_; }
  const EntitySet& current_answers() const;
  std::span<const DiscoveryStep> path() const { return path_; }

  const NodeOffer& Offer();
  bool terminal() { return Offer().terminal; }

  // Throws Error(kState) at a terminal node and Error(kInvalidChoice) when
  // `choice` is not among the offered refinements.
  void Drill(TypeId choice);
  // Returns to the previous node. Throws Error(kState) at the root.
  void Back();

  // One JSON line per step: step, node, offered, chosen, answer_count.
  std::vector<std::string> TranscriptLines() const;

 private:
  DiscoverySession(const Taxonomy& taxonomy, TypeId root, DiscoveryOptions options,
                   std::string id);
  NodeOffer Compute(TypeId node) const;

  const Taxonomy* taxonomy_;
  DiscoveryOptions options_;
  std::string id_;
  TypeId root_;
  TypeId current_;
  std::vector<DiscoveryStep> path_;
  std::unordered_map<TypeId, NodeOffer> cache_;
};

struct SimulationResult {
  std::size_t drills = 0;
  // False when the walk stopped at a node none of whose offered refinements
  // contains the target.
  bool reached = false;
  std::vector<TypeId> path;
};

// Walks from `query` towards `target`, always drilling into the offered
// refinement that contains the target (smallest answer set on ties, then name
// order). Throws Error(kPrecondition) if the target does not answer `query`.
SimulationResult SimulateDiscovery(const Taxonomy& taxonomy, TypeId query,
                                   EntityId target,
                                   const DiscoveryOptions& options);

}  // namespace qresp

#endif  // QRESP_DISCOVERY_H_
