#include "qresp/discovery.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "qresp/error.h"
#include "qresp/taxonomy.h"

namespace qresp {

DiscoveryOptions DiscoveryOptions::ForSimulation(std::size_t k) {
  DiscoveryOptions options;
  options.k = k;
  options.listing_threshold = 1;
  return options;
}

DiscoverySession::DiscoverySession(const Taxonomy& taxonomy, TypeId root,
                                   DiscoveryOptions options, std::string id)
    : taxonomy_(&taxonomy),
      options_(std::move(options)),
      id_(std::move(id)),
      root_(root),
      current_(root) {}

DiscoverySession DiscoverySession::Start(const Taxonomy& taxonomy, TypeId query,
                                         DiscoveryOptions options, std::string id) {
  if (query.value >= taxonomy.type_count()) {
    throw Error(ErrorCode::kNotFound, "unknown type id " + std::to_string(query.value));
  }
  if (options.k == 0) throw Error(ErrorCode::kDomain, "k must be >= 1");
  return DiscoverySession(taxonomy, query, std::move(options), std::move(id));
}

const EntitySet& DiscoverySession::current_answers() const {
  return taxonomy_->Answers(current_);
}

NodeOffer DiscoverySession::Compute(TypeId node) const {
  NodeOffer offer;
  offer.node = node;
  offer.pool = ApplyFilters(
      *taxonomy_, BuildCandidatePool(*taxonomy_, node, options_.transitive_candidates),
      options_.filters);
  const std::size_t answers = taxonomy_->Answers(node).size();
  if (answers <= options_.listing_threshold || offer.pool.kept.empty()) {
    offer.terminal = true;
    return offer;
  }
  if (offer.pool.kept.size() < options_.k) {
    offer.offered = RefinementSet::Make(*taxonomy_, node, offer.pool.kept);
    offer.cost = Score(*taxonomy_, *offer.offered);
    offer.status = SolveStatus::kOptimal;
    return offer;
  }
  SolveResult result = Solve(*taxonomy_, offer.pool, options_.k, options_.solve);
  offer.offered = std::move(result.best);
  offer.cost = std::move(result.cost);
  offer.status = result.status;
  return offer;
}

const NodeOffer& DiscoverySession::Offer() {
  auto it = cache_.find(current_);
  if (it == cache_.end()) it = cache_.emplace(current_, Compute(current_)).first;
  return it->second;
}

void DiscoverySession::Drill(TypeId choice) {
  const NodeOffer& offer = Offer();
  if (offer.terminal) {
    throw Error(ErrorCode::kState, "'" + taxonomy_->TypeName(current_) +
                                       "' is terminal; nothing to drill into");
  }
  const auto& members = offer.offered->members;
  if (std::find(members.begin(), members.end(), choice) == members.end()) {
    const std::string name = choice.value < taxonomy_->type_count()
                                 ? taxonomy_->TypeName(choice)
                                 : "#" + std::to_string(choice.value);
    throw Error(ErrorCode::kInvalidChoice, "'" + name + "' is not offered at '" +
                                               taxonomy_->TypeName(current_) + "'");
  }
  path_.push_back(DiscoveryStep{current_, *offer.offered, choice,
                                taxonomy_->Answers(choice).size()});
  current_ = choice;
}

void DiscoverySession::Back() {
  if (path_.empty()) throw Error(ErrorCode::kState, "already at the starting query");
  current_ = path_.back().from;
  path_.pop_back();
}

std::vector<std::string> DiscoverySession::TranscriptLines() const {
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    const DiscoveryStep& step = path_[i];
    nlohmann::ordered_json rec = {
        {"step", i + 1},
        {"node", taxonomy_->TypeName(step.from)},
        {"offered", step.offered.MemberNames(*taxonomy_)},
        {"chosen", taxonomy_->TypeName(step.chosen)},
        {"answer_count", step.answer_count},
    };
    lines.push_back(rec.dump());
  }
  return lines;
}

SimulationResult SimulateDiscovery(const Taxonomy& taxonomy, TypeId query,
                                   EntityId target, const DiscoveryOptions& options) {
  if (!taxonomy.Answers(query).contains(target)) {
    throw Error(ErrorCode::kPrecondition,
                "target '" + taxonomy.EntityName(target) + "' does not answer '" +
                    taxonomy.TypeName(query) + "'");
  }
  DiscoverySession session = DiscoverySession::Start(taxonomy, query, options);
  SimulationResult result;
  result.path.push_back(query);
  while (!session.terminal()) {
    const NodeOffer& offer = session.Offer();
    std::optional<TypeId> next;
    for (TypeId m : offer.offered->members) {
      if (!taxonomy.Answers(m).contains(target)) continue;
      if (!next || taxonomy.Answers(m).size() < taxonomy.Answers(*next).size()) next = m;
    }
    if (!next) return result;
    session.Drill(*next);
    ++result.drills;
    result.path.push_back(*next);
  }
  result.reached = true;
  return result;
}

}  // namespace qresp
