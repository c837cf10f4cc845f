#ifndef QRESP_STATS_H_
#define QRESP_STATS_H_

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <utility>

#include "qresp/error.h"

namespace qresp {

enum class Alternative { kTwoSided, kGreater, kLess };

// Exact binomial test of `successes` in `trials` against success rate p0.
// kGreater sums P(X >= successes), kLess sums P(X <= successes) and kTwoSided
// sums every outcome no more likely than the observed one. Throws
// Error(kDomain) if successes > trials or p0 is outside [0, 1].
double BinomialTest(std::uint64_t successes, std::uint64_t trials, double p0 = 0.5,
                    Alternative alternative = Alternative::kGreater);

// table[row][col].
using Table2x2 = std::array<std::array<std::int64_t, 2>, 2>;

// Two-sided Fisher exact test: total probability, under fixed margins, of the
// tables no more likely than the observed one. A zero margin admits a single
// table and gives 1. Throws Error(kDomain) on a negative cell.
double FisherExact2x2(const Table2x2& table);

struct ChiSquareResult {
  double statistic = 0;
  double p_value = 1;
};

// Pearson chi-square test of independence with one degree of freedom.
// A table with a zero margin has no defined statistic and yields {0, 1}.
ChiSquareResult ChiSquare2x2(const Table2x2& table, bool yates_correction = false);

// Upper tail of the chi-square distribution with one degree of freedom.
double ChiSquare1Tail(double statistic);

// Cohen's kappa between two raters labelling the same items. Throws
// Error(kDomain) on a length mismatch and Error(kEmptyInput) on no items.
// Gives 1 when both raters agree on every item and chance agreement is 1.
template <typename Label>
double CohenKappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDomain, "label sequences differ in length");
  }
  if (a.empty()) throw Error(ErrorCode::kEmptyInput, "no labels");
  std::map<Label, std::pair<double, double>> marginals;
  double agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    marginals[a[i]].first += 1;
    marginals[b[i]].second += 1;
    if (a[i] == b[i]) agree += 1;
  }
  const double n = static_cast<double>(a.size());
  const double p_o = agree / n;
  double p_e = 0;
  for (const auto& [label, counts] : marginals) {
    p_e += (counts.first / n) * (counts.second / n);
  }
  if (p_e >= 1.0) return p_o >= 1.0 ? 1.0 : 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

}  // namespace qresp

#endif  // QRESP_STATS_H_
