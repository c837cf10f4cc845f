#ifndef QRESP_TAXONOMY_H_
#define QRESP_TAXONOMY_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qresp/entity_set.h"
#include "qresp/ids.h"

namespace qresp {

struct LoadOptions {
  // Break cycles instead of failing. Each cycle found loses the edge whose
  // child name sorts last (bytewise); every drop is recorded in the report.
  bool drop_back_edges = false;
};

struct DroppedEdge {
  std::string child;
  std::string parent;
};

struct LoadReport {
  std::size_t types = 0;
  std::size_t entities = 0;
  std::size_t edges = 0;
  std::size_t instances = 0;
  std::vector<DroppedEdge> dropped_edges;

  // One JSON object per line: a summary record followed by one record per
  // dropped edge.
  std::vector<std::string> ToLines() const;
};

class Taxonomy;

// Accumulates edges and instances, interning names in first-appearance order.
class TaxonomyBuilder {
 public:
  TypeId InternType(std::string_view name);
  EntityId InternEntity(std::string_view name);

  // `child` is a subtype of `parent`. Duplicate edges are ignored.
  void AddEdge(std::string_view child, std::string_view parent);
  // `entity` is a direct instance of `type`. Duplicates are ignored.
  void AddInstance(std::string_view entity, std::string_view type);

  // Throws Error(kCycle) on a cyclic hierarchy unless options ask for
  // back-edge dropping.
  Taxonomy Build(const LoadOptions& options = {},
                 LoadReport* report = nullptr) &&;

 private:
  struct PairHash {
    std::size_t operator()(std::pair<std::uint32_t, std::uint32_t> p) const {
      return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
    }
  };

  std::vector<std::string> type_names_;
  std::unordered_map<std::string, TypeId> type_ids_;
  std::vector<std::string> entity_names_;
  std::unordered_map<std::string, EntityId> entity_ids_;
  std::vector<std::pair<TypeId, TypeId>> edges_;
  std::unordered_set<std::pair<std::uint32_t, std::uint32_t>, PairHash>
      edge_seen_;
  std::vector<std::pair<EntityId, TypeId>> instances_;
  std::unordered_set<std::pair<std::uint32_t, std::uint32_t>, PairHash>
      instance_seen_;
};

// Immutable type hierarchy (a DAG; a type may have several parents) with the
// entity instances of every type closed under the subtype relation: an
// instance of a type is an instance of all its ancestors. Safe to share
// between threads once built.
class Taxonomy {
 public:
  // Reads `child<TAB>parent` and `entity<TAB>type` TSV streams. Lines that are
  // blank or start with '#' are skipped. Throws ParseError naming the line on
  // a wrong column count or empty field.
  static Taxonomy Load(std::istream& edges, std::istream& instances,
                       const LoadOptions& options = {},
                       LoadReport* report = nullptr);

  std::size_t type_count() const { return type_names_.size(); }
  std::size_t entity_count() const { return entity_names_.size(); }

  std::optional<TypeId> FindType(std::string_view name) const;
  std::optional<EntityId> FindEntity(std::string_view name) const;
  // Throws Error(kNotFound).
  TypeId TypeOrThrow(std::string_view name) const;
  EntityId EntityOrThrow(std::string_view name) const;

  const std::string& TypeName(TypeId t) const;
  const std::string& EntityName(EntityId e) const;

  // All entities that are instances of `t` under closure, i.e. the answers to
  // the list query that `t` names. O(1).
  const EntitySet& Answers(TypeId t) const;
  const EntitySet& DirectInstances(TypeId t) const;

  std::span<const TypeId> Parents(TypeId t) const;
  std::span<const TypeId> Children(TypeId t) const;

  // Direct children, or every strict descendant when `transitive`. Ascending
  // id order, no duplicates.
  std::vector<TypeId> Subtypes(TypeId t, bool transitive = false) const;

  bool IsStrictDescendant(TypeId descendant, TypeId ancestor) const;

  // Up to `limit` types whose name starts with `prefix`, in name order.
  std::vector<TypeId> TypesWithPrefix(std::string_view prefix,
                                      std::size_t limit) const;

  // Retained edges and instances in load order. Reloading the written streams
  // reproduces the same name/id assignment.
  void WriteEdges(std::ostream& out) const;
  void WriteInstances(std::ostream& out) const;

  std::span<const std::pair<TypeId, TypeId>> edges() const { return edges_; }

 private:
  friend class TaxonomyBuilder;
  Taxonomy() = default;

  void CheckType(TypeId t) const;

  std::vector<std::string> type_names_;
  std::unordered_map<std::string, TypeId> type_ids_;
  std::vector<std::string> entity_names_;
  std::unordered_map<std::string, EntityId> entity_ids_;
  std::vector<std::pair<TypeId, TypeId>> edges_;
  std::vector<std::pair<EntityId, TypeId>> instances_;
  std::vector<std::vector<TypeId>> parents_;
  std::vector<std::vector<TypeId>> children_;
  std::vector<EntitySet> direct_;
  std::vector<EntitySet> closed_;
  std::vector<TypeId> by_name_;
};

}  // namespace qresp

#endif  // QRESP_TAXONOMY_H_
