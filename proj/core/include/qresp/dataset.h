#ifndef QRESP_DATASET_H_
#define QRESP_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qresp/candidate_filter.h"
#include "qresp/ids.h"
#include "qresp/optimizer.h"

namespace qresp {

class Taxonomy;

enum class Method { kQresp, kRandom, kRandomFiltered };

std::string_view MethodName(Method method);
// Throws Error(kConfig) for anything but qresp, random, random-filtered.
Method ParseMethod(std::string_view name);

struct PipelineConfig {
  Method method = Method::kQresp;
  std::size_t k = 5;
  std::size_t min_answers_train = 50;
  std::size_t min_subtypes_dev = 15;
  std::size_t min_answers_per_dev_subtype = 200;
  std::size_t dev_sample_size = 200;
  std::uint64_t seed = 0;
  bool transitive_candidates = false;
  FilterConfig filters = FilterConfig::Default();
  SolveOptions solve;
  // Worker threads for per-query work. Output order does not depend on it.
  unsigned threads = 1;

  // Throws Error(kConfig) unless every threshold is positive and k >= 2.
  void Validate() const;
};

struct DatasetRecord {
  std::string query;
  Method method = Method::kQresp;
  std::string split;  // "train" or "dev"
  std::vector<std::string> refinements;
  std::optional<std::int64_t> cost;
  // Solver status; qresp records only.
  std::optional<SolveStatus> status;
  std::size_t candidates_all = 0;
  std::size_t candidates_kept = 0;
  std::uint64_t seed = 0;

  std::string ToLine() const;
  // Throws ParseError (line 0) on malformed input.
  static DatasetRecord FromLine(std::string_view line);
};

// Reads DatasetRecord lines, skipping blanks and marker records.
std::vector<DatasetRecord> ReadDatasetRecords(std::istream& in);

struct DevSelection {
  std::vector<TypeId> queries;  // ascending name order
  std::optional<std::string> warning;
};

// Seeded uniform sample of the types that have at least min_subtypes_dev
// subtypes with at least min_answers_per_dev_subtype answers each.
DevSelection SelectDevQueries(const Taxonomy& taxonomy, const PipelineConfig& config);

// Types with enough answers and at least k candidates in the method's pool
// (filtered unless the method is random), excluding the dev queries and all
// their descendants. Ascending name order.
std::vector<TypeId> SelectTrainingQueries(const Taxonomy& taxonomy,
                                          const PipelineConfig& config,
                                          std::span<const TypeId> dev);

// The record for one query, or nullopt when its pool has fewer than k
// candidates.
std::optional<DatasetRecord> BuildRecord(const Taxonomy& taxonomy,
                                         const PipelineConfig& config, TypeId query,
                                         std::string_view split);

// Training records then dev records, each in ascending query-name order.
std::vector<DatasetRecord> BuildDataset(const Taxonomy& taxonomy,
                                        const PipelineConfig& config);

// Streams BuildDataset's records as lines. If building fails part-way a
// {"record":"partial-output"} marker line is written before the error is
// rethrown; a failing stream raises Error(kIo).
void WriteDataset(const Taxonomy& taxonomy, const PipelineConfig& config,
                  std::ostream& out);

struct CostPair {
  std::string query;
  std::int64_t cost_a = 0;
  std::int64_t cost_b = 0;
  std::optional<SolveStatus> status_a;
  // The optimized run (a) scored worse than the baseline (b).
  bool search_error = false;
};

struct CostComparison {
  std::vector<CostPair> pairs;  // ascending query order
  std::size_t a_lower = 0;
  std::size_t equal = 0;
  std::size_t a_higher = 0;
  std::size_t search_errors = 0;
  // Least-squares fit cost_a = slope * cost_b + intercept; absent when every
  // cost_b is the same.
  std::optional<double> slope;
  std::optional<double> intercept;

  std::vector<std::string> ToLines() const;
};

// Pairs two runs over the same queries. Throws Error(kAlignment) listing the
// queries present on one side only, and Error(kDomain) for records without a
// cost.
CostComparison CompareCosts(std::span<const DatasetRecord> a,
                            std::span<const DatasetRecord> b);

}  // namespace qresp

#endif  // QRESP_DATASET_H_
