#ifndef QRESP_CANDIDATE_FILTER_H_
#define QRESP_CANDIDATE_FILTER_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qresp/ids.h"

namespace qresp {

class Taxonomy;

enum class RuleKind { kPattern, kTermList, kAnnotationCategory };

std::string_view RuleKindName(RuleKind kind);

// Phrase -> annotation category table (e.g. "french" -> NORP). Stands in for a
// named-entity tagger: a phrase of one or more tokens is tagged with the
// category listed for it. Lookups are case-insensitive.
class Gazetteer {
 public:
  // `token<TAB>category` TSV; blank and '#' lines skipped.
  static Gazetteer Load(std::istream& in);
  // Demonyms, countries, continents and decade tokens.
  static const Gazetteer& Default();

  void Add(std::string_view phrase, std::string_view category);
  std::optional<std::string> Lookup(std::string_view phrase) const;
  std::size_t max_phrase_tokens() const { return max_tokens_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
  std::size_t max_tokens_ = 0;
};

// A single removal rule, evaluated against the tokens a candidate adds to the
// query name.
//   kPattern:            ECMAScript regex, case-insensitive; end of input
//                        counts as a non-digit character.
//   kTermList:           comma-separated terms, matched as whole tokens.
//   kAnnotationCategory: comma-separated gazetteer categories.
class FilterRule {
 public:
  // Throws Error(kConfig) on an invalid pattern or empty payload.
  FilterRule(std::string id, RuleKind kind, std::string payload);

  const std::string& id() const { return id_; }
  RuleKind kind() const { return kind_; }
  const std::string& payload() const { return payload_; }

  // The matched span within `added` (the added tokens joined by single
  // spaces), or nullopt. Annotation rules need a gazetteer; passing null for
  // one throws Error(kConfig).
  std::optional<std::string> Match(std::span<const std::string> added,
                                   const Gazetteer* gazetteer) const;
  std::optional<std::string> MatchText(std::string_view text,
                                       const Gazetteer* gazetteer) const;

 private:
  std::string id_;
  RuleKind kind_;
  std::string payload_;
  std::regex pattern_;
  std::vector<std::string> items_;  // lowercase terms or categories
};

// `kind<TAB>payload` lines, kinds `pattern`, `term-list`,
// `annotation-category`. Rule ids are `<kind>#<line-order index>`.
std::vector<FilterRule> LoadRules(std::istream& in);
const std::vector<FilterRule>& DefaultRules();

struct FilterConfig {
  bool enabled = true;
  std::vector<FilterRule> rules;
  std::optional<Gazetteer> gazetteer;

  // Default rules with the default gazetteer.
  static FilterConfig Default();
  static FilterConfig Disabled();
  const Gazetteer* gazetteer_ptr() const {
    return gazetteer ? &*gazetteer : nullptr;
  }
};

// Whitespace split; leading and trailing ASCII punctuation stripped from each
// token; empty tokens dropped.
std::vector<std::string> Tokenize(std::string_view text);

// Tokens of `candidate_name` not present (case-insensitively) in
// `query_name`, in candidate order.
std::vector<std::string> TokenDiff(std::string_view query_name,
                                   std::string_view candidate_name);

struct Removal {
  std::string rule_id;
  std::string span;
};

struct CandidatePool {
  TypeId query;
  std::vector<TypeId> all;
  std::vector<TypeId> kept;
  // Only removed candidates have an entry; each entry is non-empty.
  std::map<TypeId, std::vector<Removal>> removals;
};

// Subtypes of `query` (direct, or all descendants) with nothing removed.
CandidatePool BuildCandidatePool(const Taxonomy& taxonomy, TypeId query,
                                 bool transitive = false);

// Every rule that fires on the candidate's added tokens.
std::vector<Removal> EvaluateRules(std::string_view query_name,
                                   std::string_view candidate_name,
                                   std::span<const FilterRule> rules,
                                   const Gazetteer* gazetteer);

// Recomputes `kept` and `removals` from `pool.all`. Throws Error(kConfig) when
// an annotation rule is configured without a gazetteer.
CandidatePool ApplyFilters(const Taxonomy& taxonomy, CandidatePool pool,
                           std::span<const FilterRule> rules,
                           const Gazetteer* gazetteer);
CandidatePool ApplyFilters(const Taxonomy& taxonomy, CandidatePool pool,
                           const FilterConfig& config);

// One JSON line per removal: query, candidate, rule, span.
std::vector<std::string> FilterTraceLines(const Taxonomy& taxonomy,
                                          const CandidatePool& pool);

}  // namespace qresp

#endif  // QRESP_CANDIDATE_FILTER_H_
