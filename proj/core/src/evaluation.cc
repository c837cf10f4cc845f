#include "qresp/evaluation.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "qresp/error.h"
#include "qresp/taxonomy.h"

namespace qresp {
namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool IsPunct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) return out;
    start = tab + 1;
  }
}

void StripCr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

double Norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

nlohmann::ordered_json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string NormalizeName(std::string_view name) {
  std::string out;
  bool pending_space = false;
  for (char c : name) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  std::size_t begin = 0;
  std::size_t end = out.size();
  while (begin < end && (IsPunct(out[begin]) || IsSpace(out[begin]))) ++begin;
  while (end > begin && (IsPunct(out[end - 1]) || IsSpace(out[end - 1]))) --end;
  return out.substr(begin, end - begin);
}

Prf PrfFromCounts(std::size_t true_positives, std::size_t predicted, std::size_t actual) {
  if (predicted == 0 && actual == 0) return {1, 1, 1};
  Prf out;
  if (predicted > 0) out.precision = static_cast<double>(true_positives) / predicted;
  if (actual > 0) out.recall = static_cast<double>(true_positives) / actual;
  if (out.precision + out.recall > 0) {
    out.f1 = 2 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

Prf SetPrf(std::span<const std::string> predicted, std::span<const std::string> silver) {
  std::set<std::string> p, s;
  for (const auto& name : predicted) p.insert(NormalizeName(name));
  for (const auto& name : silver) s.insert(NormalizeName(name));
  std::size_t hits = 0;
  for (const auto& name : p) hits += s.contains(name);
  return PrfFromCounts(hits, p.size(), s.size());
}

EmbeddingTable EmbeddingTable::Load(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    StripCr(line);
    if (line.empty()) continue;
    const auto cols = SplitTabs(line);
    if (cols.size() != 2 || cols[0].empty()) {
      throw ParseError(line_no, "expected id<TAB>values");
    }
    values.clear();
    const char* p = cols[1].data();
    const char* end = p + cols[1].size();
    while (p < end) {
      while (p < end && IsSpace(*p)) ++p;
      if (p == end) break;
      double v = 0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc() || (next < end && !IsSpace(*next))) {
        throw ParseError(line_no, "bad number in vector for '" + std::string(cols[0]) + "'");
      }
      if (!std::isfinite(v)) throw ParseError(line_no, "non-finite value");
      values.push_back(v);
      p = next;
    }
    if (values.empty()) throw ParseError(line_no, "empty vector");
    if (table.size() > 0 && values.size() != table.dimension_) {
      throw ParseError(line_no, "dimension " + std::to_string(values.size()) +
                                    " differs from " + std::to_string(table.dimension_));
    }
    if (table.index_.contains(std::string(cols[0]))) {
      throw ParseError(line_no, "repeated id '" + std::string(cols[0]) + "'");
    }
    table.Add(std::string(cols[0]), values);
  }
  return table;
}

void EmbeddingTable::Add(std::string id, std::vector<double> vector) {
  if (ids_.empty()) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw Error(ErrorCode::kDomain, "embedding dimension mismatch for '" + id + "'");
  }
  for (double v : vector) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kDomain, "non-finite embedding value");
  }
  if (!index_.emplace(id, ids_.size()).second) {
    throw Error(ErrorCode::kDomain, "repeated embedding id '" + id + "'");
  }
  ids_.push_back(std::move(id));
  values_.insert(values_.end(), vector.begin(), vector.end());
}

std::optional<std::span<const double>> EmbeddingTable::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

std::span<const double> EmbeddingTable::Get(std::string_view id) const {
  auto v = Find(id);
  if (!v) throw Error(ErrorCode::kNotFound, "no embedding for '" + std::string(id) + "'");
  return *v;
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDomain, "embedding dimensions differ: " + std::to_string(a.size()) +
                                        " vs " + std::to_string(b.size()));
  }
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0 || nb == 0) throw Error(ErrorCode::kDegenerateVector, "zero-norm embedding");
  double dot = 0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return dot / (na * nb);
}

void PredictorConfig::Validate() const {
  if (!(threshold >= -1.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kConfig, "threshold must lie in [-1, 1]");
  }
}

std::vector<std::string> PredictAnswerIds(const EmbeddingTable& entities,
                                          const EmbeddingTable& queries,
                                          std::string_view query,
                                          const PredictorConfig& config) {
  config.Validate();
  const std::span<const double> g = queries.Get(query);
  std::vector<std::string> out;
  for (std::size_t r = 0; r < entities.size(); ++r) {
    if (Cosine(entities.row(r), g) > config.threshold) out.push_back(entities.id(r));
  }
  return out;
}

EntitySet PredictAnswers(const Taxonomy& taxonomy, const EmbeddingTable& entities,
                         const EmbeddingTable& queries, std::string_view query,
                         const PredictorConfig& config) {
  EntitySet out(taxonomy.entity_count());
  for (const std::string& id : PredictAnswerIds(entities, queries, query, config)) {
    if (auto e = taxonomy.FindEntity(id)) out.insert(*e);
  }
  return out;
}

bool FlagIrrelevant(const EntitySet& query_answers, const EntitySet& refinement_answers) {
  return !query_answers.Intersects(refinement_answers);
}

std::vector<Judgment> LoadJudgments(std::istream& in) {
  std::vector<Judgment> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripCr(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cols = SplitTabs(line);
    if (cols.size() != 3 || cols[0].empty() || cols[1].empty()) {
      throw ParseError(line_no, "expected query<TAB>refinement<TAB>label");
    }
    Judgment j{std::string(cols[0]), std::string(cols[1]), true};
    if (cols[2] == "irrelevant") {
      j.relevant = false;
    } else if (cols[2] != "relevant") {
      throw ParseError(line_no, "label must be relevant or irrelevant, got '" +
                                    std::string(cols[2]) + "'");
    }
    if (!seen.emplace(j.query, j.refinement).second) {
      throw ParseError(line_no, "repeated pair '" + j.query + "' / '" + j.refinement + "'");
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<bool> FlagJudgedPairs(const Taxonomy& taxonomy, const EmbeddingTable& entities,
                                  const EmbeddingTable& queries,
                                  std::span<const Judgment> judgments,
                                  const PredictorConfig& config) {
  std::unordered_map<std::string, EntitySet> cache;
  auto predicted = [&](const std::string& name) -> const EntitySet& {
    auto it = cache.find(name);
    if (it == cache.end()) {
      it = cache.emplace(name, PredictAnswers(taxonomy, entities, queries, name, config)).first;
    }
    return it->second;
  };
  std::vector<bool> flags;
  flags.reserve(judgments.size());
  for (const Judgment& j : judgments) {
    flags.push_back(FlagIrrelevant(predicted(j.query), predicted(j.refinement)));
  }
  return flags;
}

CorrectionReport MakeCorrectionReport(std::span<const Judgment> judgments,
                                      const std::vector<bool>& flags,
                                      bool yates_correction) {
  if (judgments.empty()) throw Error(ErrorCode::kEmptyInput, "no judgments");
  if (flags.size() != judgments.size()) {
    throw Error(ErrorCode::kDomain, "flag count " + std::to_string(flags.size()) +
                                        " differs from judgment count " +
                                        std::to_string(judgments.size()));
  }
  CorrectionReport r;
  r.yates_correction = yates_correction;
  for (std::size_t i = 0; i < judgments.size(); ++i) {
    if (judgments[i].relevant) {
      ++(flags[i] ? r.relevant_flagged : r.relevant_unflagged);
    } else {
      ++(flags[i] ? r.irrelevant_flagged : r.irrelevant_unflagged);
    }
  }
  const std::size_t irrelevant = r.irrelevant_flagged + r.irrelevant_unflagged;
  const std::size_t relevant = r.relevant_flagged + r.relevant_unflagged;
  if (irrelevant > 0) r.flag_rate_irrelevant = static_cast<double>(r.irrelevant_flagged) / irrelevant;
  if (relevant > 0) r.flag_rate_relevant = static_cast<double>(r.relevant_flagged) / relevant;
  r.chi_square = ChiSquare2x2(r.matrix(), yates_correction);
  r.classifier = PrfFromCounts(r.irrelevant_flagged, r.irrelevant_flagged + r.relevant_flagged,
                               irrelevant);
  return r;
}

std::string CorrectionReport::ToLine() const {
  nlohmann::ordered_json j = {
      {"record", "correction"},
      {"relevant_flagged", relevant_flagged},
      {"relevant_unflagged", relevant_unflagged},
      {"irrelevant_flagged", irrelevant_flagged},
      {"irrelevant_unflagged", irrelevant_unflagged},
      {"flag_rate_irrelevant", OptionalJson(flag_rate_irrelevant)},
      {"flag_rate_relevant", OptionalJson(flag_rate_relevant)},
      {"chi_square", chi_square.statistic},
      {"p_value", chi_square.p_value},
      {"yates_correction", yates_correction},
      {"precision", classifier.precision},
      {"recall", classifier.recall},
      {"f1", classifier.f1},
  };
  return j.dump();
}

}  // namespace qresp
