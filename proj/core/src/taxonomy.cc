#include "qresp/taxonomy.h"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "qresp/error.h"

namespace qresp {
namespace {

// Splits a TSV line into exactly two non-empty fields.
std::pair<std::string_view, std::string_view> SplitPair(std::string_view line,
                                                        std::size_t line_no) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos ||
      line.find('\t', tab + 1) != std::string_view::npos) {
    throw ParseError(line_no, "expected 2 tab-separated columns");
  }
  std::string_view left = line.substr(0, tab);
  std::string_view right = line.substr(tab + 1);
  if (left.empty() || right.empty()) {
    throw ParseError(line_no, "empty field");
  }
  return {left, right};
}

template <typename Fn>
void ForEachRecord(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto [left, right] = SplitPair(line, line_no);
    fn(left, right);
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read failure");
}

// Returns the nodes of one cycle in edge order (each node's successor is one
// of its parents, the last node's parent is the first node), or an empty
// vector when the graph is acyclic. Deterministic: roots are tried in id
// order and parents in adjacency order.
std::vector<TypeId> FindCycle(const std::vector<std::vector<TypeId>>& parents) {
  const std::size_t n = parents.size();
  std::vector<std::uint8_t> color(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    stack.push_back({root, 0});
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < parents[v].size()) {
        const std::uint32_t u = parents[v][next++].value;
        if (color[u] == 1) {
          std::vector<TypeId> cycle;
          auto it = std::find_if(stack.begin(), stack.end(),
                                 [u](const auto& f) { return f.first == u; });
          for (; it != stack.end(); ++it) cycle.push_back(TypeId{it->first});
          return cycle;
        }
        if (color[u] == 0) {
          color[u] = 1;
          stack.push_back({u, 0});
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

std::vector<std::string> LoadReport::ToLines() const {
  std::vector<std::string> lines;
  nlohmann::ordered_json summary = {
      {"record", "load"},          {"types", types},
      {"entities", entities},      {"edges", edges},
      {"instances", instances},    {"dropped_edges", dropped_edges.size()},
  };
  lines.push_back(summary.dump());
  for (const DroppedEdge& e : dropped_edges) {
    nlohmann::ordered_json rec = {
        {"record", "dropped_edge"}, {"child", e.child}, {"parent", e.parent}};
    lines.push_back(rec.dump());
  }
  return lines;
}

TypeId TaxonomyBuilder::InternType(std::string_view name) {
  auto [it, inserted] = type_ids_.try_emplace(
      std::string(name), TypeId{static_cast<std::uint32_t>(type_names_.size())});
  if (inserted) type_names_.emplace_back(name);
  return it->second;
}

EntityId TaxonomyBuilder::InternEntity(std::string_view name) {
  auto [it, inserted] = entity_ids_.try_emplace(
      std::string(name),
      EntityId{static_cast<std::uint32_t>(entity_names_.size())});
  if (inserted) entity_names_.emplace_back(name);
  return it->second;
}

void TaxonomyBuilder::AddEdge(std::string_view child, std::string_view parent) {
  const TypeId c = InternType(child);
  const TypeId p = InternType(parent);
  if (edge_seen_.insert({c.value, p.value}).second) edges_.push_back({c, p});
}

void TaxonomyBuilder::AddInstance(std::string_view entity,
                                  std::string_view type) {
  const EntityId e = InternEntity(entity);
  const TypeId t = InternType(type);
  if (instance_seen_.insert({e.value, t.value}).second) {
    instances_.push_back({e, t});
  }
}

Taxonomy TaxonomyBuilder::Build(const LoadOptions& options,
                                LoadReport* report) && {
  Taxonomy tax;
  const std::size_t n_types = type_names_.size();
  const std::size_t n_entities = entity_names_.size();

  tax.parents_.assign(n_types, {});
  for (auto [c, p] : edges_) tax.parents_[c.value].push_back(p);

  std::vector<DroppedEdge> dropped;
  for (;;) {
    std::vector<TypeId> cycle = FindCycle(tax.parents_);
    if (cycle.empty()) break;
    if (!options.drop_back_edges) {
      std::string msg = "cycle detected: ";
      for (TypeId t : cycle) msg += type_names_[t.value] + " -> ";
      msg += type_names_[cycle.front().value];
      throw Error(ErrorCode::kCycle, msg);
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < cycle.size(); ++i) {
      if (type_names_[cycle[i].value] > type_names_[cycle[worst].value]) {
        worst = i;
      }
    }
    const TypeId child = cycle[worst];
    const TypeId parent = cycle[(worst + 1) % cycle.size()];
    std::erase(tax.parents_[child.value], parent);
    std::erase(edges_, std::pair{child, parent});
    dropped.push_back({type_names_[child.value], type_names_[parent.value]});
  }

  tax.children_.assign(n_types, {});
  for (auto [c, p] : edges_) tax.children_[p.value].push_back(c);

  std::vector<std::vector<std::uint32_t>> direct_ids(n_types);
  for (auto [e, t] : instances_) direct_ids[t.value].push_back(e.value);
  tax.direct_.reserve(n_types);
  for (auto& ids : direct_ids) {
    std::sort(ids.begin(), ids.end());
    tax.direct_.push_back(EntitySet::FromSorted(n_entities, std::move(ids)));
  }

  // Children before parents: a type is ready once all its children are closed.
  std::vector<std::size_t> pending(n_types);
  std::deque<std::uint32_t> ready;
  for (std::uint32_t t = 0; t < n_types; ++t) {
    pending[t] = tax.children_[t].size();
    if (pending[t] == 0) ready.push_back(t);
  }
  tax.closed_ = tax.direct_;
  while (!ready.empty()) {
    const std::uint32_t t = ready.front();
    ready.pop_front();
    for (TypeId p : tax.parents_[t]) {
      tax.closed_[p.value] |= tax.closed_[t];
      if (--pending[p.value] == 0) ready.push_back(p.value);
    }
  }

  tax.by_name_.reserve(n_types);
  for (std::uint32_t t = 0; t < n_types; ++t) tax.by_name_.push_back(TypeId{t});
  std::sort(tax.by_name_.begin(), tax.by_name_.end(), [&](TypeId a, TypeId b) {
    return type_names_[a.value] < type_names_[b.value];
  });

  if (report != nullptr) {
    report->types = n_types;
    report->entities = n_entities;
    report->edges = edges_.size();
    report->instances = instances_.size();
    report->dropped_edges = std::move(dropped);
  }

  tax.type_names_ = std::move(type_names_);
  tax.type_ids_ = std::move(type_ids_);
  tax.entity_names_ = std::move(entity_names_);
  tax.entity_ids_ = std::move(entity_ids_);
  tax.edges_ = std::move(edges_);
  tax.instances_ = std::move(instances_);
  return tax;
}

Taxonomy Taxonomy::Load(std::istream& edges, std::istream& instances,
                        const LoadOptions& options, LoadReport* report) {
  TaxonomyBuilder builder;
  ForEachRecord(edges, [&](std::string_view child, std::string_view parent) {
    builder.AddEdge(child, parent);
  });
  ForEachRecord(instances, [&](std::string_view entity, std::string_view type) {
    builder.AddInstance(entity, type);
  });
  return std::move(builder).Build(options, report);
}

std::optional<TypeId> Taxonomy::FindType(std::string_view name) const {
  auto it = type_ids_.find(std::string(name));
  if (it == type_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<EntityId> Taxonomy::FindEntity(std::string_view name) const {
  auto it = entity_ids_.find(std::string(name));
  if (it == entity_ids_.end()) return std::nullopt;
  return it->second;
}

TypeId Taxonomy::TypeOrThrow(std::string_view name) const {
  if (auto t = FindType(name)) return *t;
  throw Error(ErrorCode::kNotFound, "unknown type: " + std::string(name));
}

EntityId Taxonomy::EntityOrThrow(std::string_view name) const {
  if (auto e = FindEntity(name)) return *e;
  throw Error(ErrorCode::kNotFound, "unknown entity: " + std::string(name));
}

void Taxonomy::CheckType(TypeId t) const {
  if (t.value >= type_names_.size()) {
    throw Error(ErrorCode::kNotFound,
                "unknown type id " + std::to_string(t.value));
  }
}

const std::string& Taxonomy::TypeName(TypeId t) const {
  CheckType(t);
  return type_names_[t.value];
}

const std::string& Taxonomy::EntityName(EntityId e) const {
  if (e.value >= entity_names_.size()) {
    throw Error(ErrorCode::kNotFound,
                "unknown entity id " + std::to_string(e.value));
  }
  return entity_names_[e.value];
}

const EntitySet& Taxonomy::Answers(TypeId t) const {
  CheckType(t);
  return closed_[t.value];
}

const EntitySet& Taxonomy::DirectInstances(TypeId t) const {
  CheckType(t);
  return direct_[t.value];
}

std::span<const TypeId> Taxonomy::Parents(TypeId t) const {
  CheckType(t);
  return parents_[t.value];
}

std::span<const TypeId> Taxonomy::Children(TypeId t) const {
  CheckType(t);
  return children_[t.value];
}

std::vector<TypeId> Taxonomy::Subtypes(TypeId t, bool transitive) const {
  CheckType(t);
  std::vector<TypeId> out;
  if (!transitive) {
    out = children_[t.value];
  } else {
    std::vector<bool> seen(type_names_.size(), false);
    std::vector<TypeId> frontier = children_[t.value];
    while (!frontier.empty()) {
      const TypeId c = frontier.back();
      frontier.pop_back();
      if (seen[c.value]) continue;
      seen[c.value] = true;
      out.push_back(c);
      for (TypeId gc : children_[c.value]) {
        if (!seen[gc.value]) frontier.push_back(gc);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Taxonomy::IsStrictDescendant(TypeId descendant, TypeId ancestor) const {
  CheckType(descendant);
  CheckType(ancestor);
  std::vector<bool> seen(type_names_.size(), false);
  std::vector<TypeId> frontier(parents_[descendant.value].begin(),
                               parents_[descendant.value].end());
  while (!frontier.empty()) {
    const TypeId p = frontier.back();
    frontier.pop_back();
    if (p == ancestor) return true;
    if (seen[p.value]) continue;
    seen[p.value] = true;
    for (TypeId pp : parents_[p.value]) frontier.push_back(pp);
  }
  return false;
}

std::vector<TypeId> Taxonomy::TypesWithPrefix(std::string_view prefix,
                                              std::size_t limit) const {
  auto it = std::lower_bound(
      by_name_.begin(), by_name_.end(), prefix,
      [&](TypeId t, std::string_view p) { return type_names_[t.value] < p; });
  std::vector<TypeId> out;
  for (; it != by_name_.end() && out.size() < limit; ++it) {
    if (!std::string_view(type_names_[it->value]).starts_with(prefix)) break;
    out.push_back(*it);
  }
  return out;
}

void Taxonomy::WriteEdges(std::ostream& out) const {
  for (auto [c, p] : edges_) {
    out << type_names_[c.value] << '\t' << type_names_[p.value] << '\n';
  }
}

void Taxonomy::WriteInstances(std::ostream& out) const {
  for (auto [e, t] : instances_) {
    out << entity_names_[e.value] << '\t' << type_names_[t.value] << '\n';
  }
}

}  // namespace qresp
