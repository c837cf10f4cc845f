#ifndef QRESP_EVALUATION_H_
#define QRESP_EVALUATION_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qresp/entity_set.h"
#include "qresp/stats.h"

namespace qresp {

class Taxonomy;

// Lowercase, runs of whitespace collapsed to one space, surrounding
// whitespace and ASCII punctuation removed.
std::string NormalizeName(std::string_view name);

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Precision, recall and F1 from counts. An empty prediction against an empty
// truth scores 1 across the board; otherwise an empty side scores 0.
Prf PrfFromCounts(std::size_t true_positives, std::size_t predicted, std::size_t actual);

// Exact set match after NormalizeName. Duplicates collapse.
Prf SetPrf(std::span<const std::string> predicted, std::span<const std::string> silver);

// Dense vectors keyed by entity or query id, all of one dimension.
class EmbeddingTable {
 public:
  // Lines `id<TAB>v1 v2 ... vd`. Throws ParseError on a malformed line, a
  // non-finite value, a dimension change or a repeated id.
  static EmbeddingTable Load(std::istream& in);

  void Add(std::string id, std::vector<double> vector);

  std::size_t size() const { return ids_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::string& id(std::size_t row) const { return ids_[row]; }
  std::span<const double> row(std::size_t row) const {
    return {values_.data() + row * dimension_, dimension_};
  }
  std::optional<std::span<const double>> Find(std::string_view id) const;
  // Throws Error(kNotFound).
  std::span<const double> Get(std::string_view id) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> ids_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Throws Error(kDegenerateVector) if either vector has zero norm and
// Error(kDomain) if the dimensions differ.
double Cosine(std::span<const double> a, std::span<const double> b);

struct PredictorConfig {
  double threshold = 0.4;

  // Throws Error(kConfig) unless threshold lies in [-1, 1].
  void Validate() const;
};

// Ids of the entity rows whose cosine with the query's vector is strictly
// above the threshold, in table order. Throws Error(kNotFound) if the query
// has no vector.
std::vector<std::string> PredictAnswerIds(const EmbeddingTable& entities,
                                          const EmbeddingTable& queries,
                                          std::string_view query,
                                          const PredictorConfig& config);

// The same prediction as an EntitySet over the taxonomy's entities. Rows
// naming entities the taxonomy does not know are ignored.
EntitySet PredictAnswers(const Taxonomy& taxonomy, const EmbeddingTable& entities,
                         const EmbeddingTable& queries, std::string_view query,
                         const PredictorConfig& config);

// True iff the two answer sets share no entity. Symmetric.
bool FlagIrrelevant(const EntitySet& query_answers, const EntitySet& refinement_answers);

struct Judgment {
  std::string query;
  std::string refinement;
  bool relevant = true;
};

// Lines `query<TAB>refinement<TAB>relevant|irrelevant`; blank and `#` lines
// are skipped. Throws ParseError on bad lines and repeated pairs.
std::vector<Judgment> LoadJudgments(std::istream& in);

// Flags each judged pair from predicted answers of the query and of the
// refinement. Predictions are computed once per name.
std::vector<bool> FlagJudgedPairs(const Taxonomy& taxonomy, const EmbeddingTable& entities,
                                  const EmbeddingTable& queries,
                                  std::span<const Judgment> judgments,
                                  const PredictorConfig& config);

struct CorrectionReport {
  std::size_t relevant_flagged = 0;
  std::size_t relevant_unflagged = 0;
  std::size_t irrelevant_flagged = 0;
  std::size_t irrelevant_unflagged = 0;
  // Share of each human class that was flagged; absent for an empty class.
  std::optional<double> flag_rate_irrelevant;
  std::optional<double> flag_rate_relevant;
  ChiSquareResult chi_square;
  bool yates_correction = false;
  // "Flagged" read as a prediction of "irrelevant".
  Prf classifier;

  Table2x2 matrix() const {
    return {{{static_cast<std::int64_t>(relevant_flagged),
              static_cast<std::int64_t>(relevant_unflagged)},
             {static_cast<std::int64_t>(irrelevant_flagged),
              static_cast<std::int64_t>(irrelevant_unflagged)}}};
  }
  std::string ToLine() const;
};

// flags[i] belongs to judgments[i]. Throws Error(kEmptyInput) on no
// judgments and Error(kDomain) on a length mismatch.
CorrectionReport MakeCorrectionReport(std::span<const Judgment> judgments,
                                      const std::vector<bool>& flags,
                                      bool yates_correction = false);

}  // namespace qresp

#endif  // QRESP_EVALUATION_H_
