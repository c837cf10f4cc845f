#include "qresp/dataset.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "qresp/error.h"
#include "qresp/random.h"
#include "qresp/taxonomy.h"

namespace qresp {
namespace {

constexpr std::string_view kDevStreamKey = "dev-queries";

std::vector<TypeId> SortedByName(const Taxonomy& taxonomy, std::vector<TypeId> types) {
  std::sort(types.begin(), types.end(), [&](TypeId a, TypeId b) {
    return taxonomy.TypeName(a) < taxonomy.TypeName(b);
  });
  return types;
}

std::optional<SolveStatus> ParseStatus(std::string_view name) {
  if (name == "optimal") return SolveStatus::kOptimal;
  if (name == "budget-exceeded") return SolveStatus::kBudgetExceeded;
  if (name == "infeasible") return SolveStatus::kInfeasible;
  return std::nullopt;
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any call is rethrown after all workers stop.
template <typename Fn>
void ParallelFor(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::pair<TypeId, std::string_view>> DatasetQueries(
    const Taxonomy& taxonomy, const PipelineConfig& config) {
  const DevSelection dev = SelectDevQueries(taxonomy, config);
  std::vector<std::pair<TypeId, std::string_view>> queries;
  for (TypeId t : SelectTrainingQueries(taxonomy, config, dev.queries)) {
    queries.emplace_back(t, "train");
  }
  for (TypeId t : dev.queries) queries.emplace_back(t, "dev");
  return queries;
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kQresp: return "qresp";
    case Method::kRandom: return "random";
    case Method::kRandomFiltered: return "random-filtered";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  if (name == "qresp") return Method::kQresp;
  if (name == "random") return Method::kRandom;
  if (name == "random-filtered") return Method::kRandomFiltered;
  throw Error(ErrorCode::kConfig, "unknown method '" + std::string(name) +
                                      "' (expected qresp, random, random-filtered)");
}

void PipelineConfig::Validate() const {
  if (k < 2) throw Error(ErrorCode::kConfig, "k must be >= 2");
  if (min_answers_train == 0 || min_subtypes_dev == 0 ||
      min_answers_per_dev_subtype == 0 || dev_sample_size == 0) {
    throw Error(ErrorCode::kConfig, "pipeline thresholds must be positive");
  }
}

std::string DatasetRecord::ToLine() const {
  nlohmann::ordered_json rec;
  rec["query"] = query;
  rec["method"] = MethodName(method);
  rec["split"] = split;
  rec["refinements"] = refinements;
  if (cost) rec["cost"] = *cost;
  if (status) rec["status"] = SolveStatusName(*status);
  rec["candidates_all"] = candidates_all;
  rec["candidates_kept"] = candidates_kept;
  rec["seed"] = seed;
  return rec.dump();
}

DatasetRecord DatasetRecord::FromLine(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    if (j.contains("record")) throw ParseError(0, "not a dataset record");
    DatasetRecord r;
    r.query = j.at("query").get<std::string>();
    r.method = ParseMethod(j.at("method").get<std::string>());
    r.split = j.value("split", "train");
    r.refinements = j.at("refinements").get<std::vector<std::string>>();
    if (j.contains("cost") && !j["cost"].is_null()) r.cost = j["cost"].get<std::int64_t>();
    if (j.contains("status") && !j["status"].is_null()) {
      r.status = ParseStatus(j["status"].get<std::string>());
      if (!r.status) throw ParseError(0, "unknown status");
    }
    r.candidates_all = j.value("candidates_all", std::size_t{0});
    r.candidates_kept = j.value("candidates_kept", std::size_t{0});
    r.seed = j.value("seed", std::uint64_t{0});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed dataset record: ") + e.what());
  }
}

std::vector<DatasetRecord> ReadDatasetRecords(std::istream& in) {
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.find("\"record\"") != std::string::npos) {
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (!j.is_discarded() && j.is_object() && j.contains("record")) continue;
    }
    try {
      out.push_back(DatasetRecord::FromLine(line));
    } catch (const Error& e) {
      std::string message = e.what();
      if (message.starts_with("line 0: ")) message.erase(0, 8);
      throw ParseError(line_no, message);
    }
  }
  return out;
}

DevSelection SelectDevQueries(const Taxonomy& taxonomy, const PipelineConfig& config) {
  std::vector<TypeId> qualifying;
  for (std::uint32_t v = 0; v < taxonomy.type_count(); ++v) {
    const TypeId t{v};
    std::size_t big = 0;
    for (TypeId s : taxonomy.Subtypes(t, config.transitive_candidates)) {
      if (taxonomy.Answers(s).size() >= config.min_answers_per_dev_subtype) ++big;
    }
    if (big >= config.min_subtypes_dev) qualifying.push_back(t);
  }
  qualifying = SortedByName(taxonomy, std::move(qualifying));

  DevSelection out;
  if (qualifying.size() < config.dev_sample_size) {
    out.warning = "only " + std::to_string(qualifying.size()) +
                  " types qualify as dev queries; requested " +
                  std::to_string(config.dev_sample_size);
    out.queries = std::move(qualifying);
    return out;
  }
  RandomStream rng(config.seed, kDevStreamKey);
  for (std::size_t i : rng.SampleIndices(qualifying.size(), config.dev_sample_size)) {
    out.queries.push_back(qualifying[i]);
  }
  return out;
}

std::vector<TypeId> SelectTrainingQueries(const Taxonomy& taxonomy,
                                          const PipelineConfig& config,
                                          std::span<const TypeId> dev) {
  std::unordered_set<TypeId> excluded;
  for (TypeId d : dev) {
    excluded.insert(d);
    for (TypeId s : taxonomy.Subtypes(d, /*transitive=*/true)) excluded.insert(s);
  }
  std::vector<TypeId> out;
  for (std::uint32_t v = 0; v < taxonomy.type_count(); ++v) {
    const TypeId t{v};
    if (excluded.contains(t)) continue;
    if (taxonomy.Answers(t).size() < config.min_answers_train) continue;
    CandidatePool pool = BuildCandidatePool(taxonomy, t, config.transitive_candidates);
    if (pool.all.size() < config.k) continue;
    if (config.method != Method::kRandom) {
      pool = ApplyFilters(taxonomy, std::move(pool), config.filters);
      if (pool.kept.size() < config.k) continue;
    }
    out.push_back(t);
  }
  return SortedByName(taxonomy, std::move(out));
}

std::optional<DatasetRecord> BuildRecord(const Taxonomy& taxonomy,
                                         const PipelineConfig& config, TypeId query,
                                         std::string_view split) {
  const CandidatePool all = BuildCandidatePool(taxonomy, query, config.transitive_candidates);
  const CandidatePool filtered = ApplyFilters(taxonomy, all, config.filters);

  DatasetRecord rec;
  rec.query = taxonomy.TypeName(query);
  rec.method = config.method;
  rec.split = std::string(split);
  rec.candidates_all = all.all.size();
  rec.candidates_kept = filtered.kept.size();
  rec.seed = config.seed;

  if (config.method == Method::kQresp) {
    if (filtered.kept.size() < config.k) return std::nullopt;
    SolveResult result = Solve(taxonomy, filtered, config.k, config.solve);
    rec.refinements = result.best->MemberNames(taxonomy);
    rec.cost = result.cost->total;
    rec.status = result.status;
    return rec;
  }

  const std::vector<TypeId>& source =
      config.method == Method::kRandom ? all.all : filtered.kept;
  if (source.size() < config.k) return std::nullopt;
  const std::vector<TypeId> ordered = SortedByName(taxonomy, source);
  RandomStream rng(config.seed, rec.query);
  std::vector<TypeId> members;
  for (std::size_t i : rng.SampleIndices(ordered.size(), config.k)) {
    members.push_back(ordered[i]);
  }
  const RefinementSet rs = RefinementSet::Make(taxonomy, query, std::move(members));
  rec.refinements = rs.MemberNames(taxonomy);
  rec.cost = Score(taxonomy, rs).total;
  return rec;
}

std::vector<DatasetRecord> BuildDataset(const Taxonomy& taxonomy,
                                        const PipelineConfig& config) {
  config.Validate();
  const auto queries = DatasetQueries(taxonomy, config);
  std::vector<std::optional<DatasetRecord>> slots(queries.size());
  ParallelFor(queries.size(), config.threads, [&](std::size_t i) {
    slots[i] = BuildRecord(taxonomy, config, queries[i].first, queries[i].second);
  });
  std::vector<DatasetRecord> out;
  for (auto& slot : slots) {
    if (slot) out.push_back(std::move(*slot));
  }
  return out;
}

void WriteDataset(const Taxonomy& taxonomy, const PipelineConfig& config,
                  std::ostream& out) {
  config.Validate();
  const auto queries = DatasetQueries(taxonomy, config);
  const std::size_t chunk = std::max<std::size_t>(1, config.threads) * 16;
  std::size_t written = 0;
  try {
    for (std::size_t begin = 0; begin < queries.size(); begin += chunk) {
      const std::size_t end = std::min(queries.size(), begin + chunk);
      std::vector<std::optional<DatasetRecord>> slots(end - begin);
      ParallelFor(slots.size(), config.threads, [&](std::size_t i) {
        const auto& [query, split] = queries[begin + i];
        slots[i] = BuildRecord(taxonomy, config, query, split);
      });
      for (const auto& slot : slots) {
        if (!slot) continue;
        out << slot->ToLine() << '\n';
        if (!out) throw Error(ErrorCode::kIo, "failed writing dataset output");
        ++written;
      }
    }
  } catch (const std::exception& e) {
    if (out) {
      nlohmann::ordered_json marker = {
          {"record", "partial-output"}, {"records_written", written}, {"error", e.what()}};
      out << marker.dump() << '\n';
    }
    throw;
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing dataset output");
}

std::vector<std::string> CostComparison::ToLines() const {
  std::vector<std::string> lines;
  for (const CostPair& p : pairs) {
    nlohmann::ordered_json rec = {
        {"query", p.query},
        {"cost_a", p.cost_a},
        {"cost_b", p.cost_b},
    };
    if (p.status_a) rec["status_a"] = SolveStatusName(*p.status_a);
    rec["search_error"] = p.search_error;
    lines.push_back(rec.dump());
  }
  nlohmann::ordered_json summary = {
      {"record", "summary"}, {"pairs", pairs.size()}, {"a_lower", a_lower},
      {"equal", equal},      {"a_higher", a_higher},  {"search_errors", search_errors},
  };
  summary["slope"] = slope ? nlohmann::ordered_json(*slope) : nlohmann::ordered_json(nullptr);
  summary["intercept"] =
      intercept ? nlohmann::ordered_json(*intercept) : nlohmann::ordered_json(nullptr);
  lines.push_back(summary.dump());
  return lines;
}

CostComparison CompareCosts(std::span<const DatasetRecord> a,
                            std::span<const DatasetRecord> b) {
  auto index = [](std::span<const DatasetRecord> records, std::string_view side) {
    std::map<std::string, const DatasetRecord*> by_query;
    for (const DatasetRecord& r : records) {
      if (!r.cost) {
        throw Error(ErrorCode::kDomain,
                    "record for '" + r.query + "' in input " + std::string(side) + " has no cost");
      }
      if (!by_query.emplace(r.query, &r).second) {
        throw Error(ErrorCode::kAlignment,
                    "query '" + r.query + "' appears twice in input " + std::string(side));
      }
    }
    return by_query;
  };
  const auto left = index(a, "a");
  const auto right = index(b, "b");

  std::vector<std::string> only_a, only_b;
  for (const auto& [q, r] : left) {
    if (!right.contains(q)) only_a.push_back(q);
  }
  for (const auto& [q, r] : right) {
    if (!left.contains(q)) only_b.push_back(q);
  }
  if (!only_a.empty() || !only_b.empty()) {
    auto list = [](const std::vector<std::string>& names) {
      std::string s;
      for (std::size_t i = 0; i < names.size() && i < 10; ++i) {
        s += (i ? ", " : "") + names[i];
      }
      if (names.size() > 10) s += ", ... (" + std::to_string(names.size()) + " total)";
      return s.empty() ? std::string("none") : s;
    };
    throw Error(ErrorCode::kAlignment, "query sets differ; only in a: " + list(only_a) +
                                           "; only in b: " + list(only_b));
  }

  CostComparison out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [q, ra] : left) {
    const DatasetRecord* rb = right.at(q);
    CostPair p{q, *ra->cost, *rb->cost, ra->status, false};
    if (p.cost_a < p.cost_b) {
      ++out.a_lower;
    } else if (p.cost_a == p.cost_b) {
      ++out.equal;
    } else {
      ++out.a_higher;
      p.search_error = true;
      ++out.search_errors;
    }
    const auto x = static_cast<double>(p.cost_b);
    const auto y = static_cast<double>(p.cost_a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    out.pairs.push_back(std::move(p));
  }
  const auto m = static_cast<double>(out.pairs.size());
  const double var = sxx - sx * sx / m;
  if (!out.pairs.empty() && var > 0) {
    out.slope = (sxy - sx * sy / m) / var;
    out.intercept = (sy - *out.slope * sx) / m;
  }
  return out;
}

}  // namespace qresp
