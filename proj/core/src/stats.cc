#include "qresp/stats.h"

#include <cmath>
#include <vector>

namespace qresp {
namespace {

// Relative slack when comparing point probabilities, so that outcomes equal to
// the observed one up to rounding are counted on both sides.
constexpr long double kTieSlack = 1e-7L;

// Below this size binomial coefficients are exact in a long double mantissa.
constexpr std::uint64_t kExactLimit = 60;

long double LogChoose(std::uint64_t n, std::uint64_t r) {
  return std::lgamma(static_cast<long double>(n) + 1) -
         std::lgamma(static_cast<long double>(r) + 1) -
         std::lgamma(static_cast<long double>(n - r) + 1);
}

// Row r of Pascal's triangle up to n, exact for n <= kExactLimit.
std::vector<long double> ChooseRow(std::uint64_t n) {
  std::vector<long double> row(n + 1, 1);
  for (std::uint64_t r = 1; r < n; ++r) {
    row[r] = row[r - 1] * static_cast<long double>(n - r + 1) / static_cast<long double>(r);
  }
  return row;
}

long double Choose(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  if (n <= kExactLimit) {
    long double c = 1;
    r = std::min(r, n - r);
    for (std::uint64_t i = 1; i <= r; ++i) {
      c = c * static_cast<long double>(n - r + i) / static_cast<long double>(i);
    }
    return c;
  }
  return std::exp(LogChoose(n, r));
}

std::vector<long double> BinomialPmf(std::uint64_t n, long double p) {
  std::vector<long double> pmf(n + 1, 0);
  if (p <= 0) {
    pmf[0] = 1;
    return pmf;
  }
  if (p >= 1) {
    pmf[n] = 1;
    return pmf;
  }
  if (n <= kExactLimit) {
    const std::vector<long double> row = ChooseRow(n);
    for (std::uint64_t i = 0; i <= n; ++i) {
      pmf[i] = row[i] * std::pow(p, static_cast<long double>(i)) *
               std::pow(1 - p, static_cast<long double>(n - i));
    }
    return pmf;
  }
  const long double lp = std::log(p);
  const long double lq = std::log1p(-p);
  for (std::uint64_t i = 0; i <= n; ++i) {
    pmf[i] = std::exp(LogChoose(n, i) + static_cast<long double>(i) * lp +
                      static_cast<long double>(n - i) * lq);
  }
  return pmf;
}

double Clamp01(long double p) {
  return static_cast<double>(std::min<long double>(1, std::max<long double>(0, p)));
}

}  // namespace

double BinomialTest(std::uint64_t successes, std::uint64_t trials, double p0,
                    Alternative alternative) {
  if (successes > trials) {
    throw Error(ErrorCode::kDomain, "successes exceed trials");
  }
  if (!(p0 >= 0.0 && p0 <= 1.0)) {
    throw Error(ErrorCode::kDomain, "p0 must lie in [0, 1]");
  }
  const std::vector<long double> pmf = BinomialPmf(trials, p0);
  long double sum = 0;
  switch (alternative) {
    case Alternative::kGreater:
      for (std::uint64_t i = successes; i <= trials; ++i) sum += pmf[i];
      break;
    case Alternative::kLess:
      for (std::uint64_t i = 0; i <= successes; ++i) sum += pmf[i];
      break;
    case Alternative::kTwoSided: {
      // Half-rate weights below the exact limit are exact, so ties need no
      // slack there.
      const bool exact = p0 == 0.5 && trials <= kExactLimit;
      const long double limit = pmf[successes] * (exact ? 1 : 1 + kTieSlack);
      for (long double v : pmf) {
        if (v <= limit) sum += v;
      }
      break;
    }
  }
  return Clamp01(sum);
}

double FisherExact2x2(const Table2x2& table) {
  for (const auto& row : table) {
    for (std::int64_t cell : row) {
      if (cell < 0) throw Error(ErrorCode::kDomain, "negative cell in contingency table");
    }
  }
  const auto r1 = static_cast<std::uint64_t>(table[0][0] + table[0][1]);
  const auto r2 = static_cast<std::uint64_t>(table[1][0] + table[1][1]);
  const auto c1 = static_cast<std::uint64_t>(table[0][0] + table[1][0]);
  const std::uint64_t n = r1 + r2;
  const std::uint64_t c2 = n - c1;
  if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) return 1.0;

  // P(a) for the top-left cell a over its feasible range; the common factor
  // 1 / C(n, c1) cancels in the ratio below.
  const std::uint64_t lo = c1 > r2 ? c1 - r2 : 0;
  const std::uint64_t hi = std::min(r1, c1);
  std::vector<long double> weight;
  weight.reserve(hi - lo + 1);
  if (n <= kExactLimit) {
    for (std::uint64_t a = lo; a <= hi; ++a) weight.push_back(Choose(r1, a) * Choose(r2, c1 - a));
  } else {
    const long double base = LogChoose(n, c1);
    for (std::uint64_t a = lo; a <= hi; ++a) {
      weight.push_back(std::exp(LogChoose(r1, a) + LogChoose(r2, c1 - a) - base));
    }
  }
  long double total = 0;
  for (long double w : weight) total += w;
  const long double limit = weight[static_cast<std::uint64_t>(table[0][0]) - lo] *
                            (n <= kExactLimit ? 1 : 1 + kTieSlack);
  long double sum = 0;
  for (long double w : weight) {
    if (w <= limit) sum += w;
  }
  return Clamp01(sum / total);
}

double ChiSquare1Tail(double statistic) {
  if (!(statistic > 0)) return 1.0;
  return std::erfc(std::sqrt(statistic / 2.0));
}

ChiSquareResult ChiSquare2x2(const Table2x2& table, bool yates_correction) {
  double rows[2] = {0, 0};
  double cols[2] = {0, 0};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (table[i][j] < 0) throw Error(ErrorCode::kDomain, "negative cell in contingency table");
      rows[i] += static_cast<double>(table[i][j]);
      cols[j] += static_cast<double>(table[i][j]);
    }
  }
  const double n = rows[0] + rows[1];
  if (rows[0] == 0 || rows[1] == 0 || cols[0] == 0 || cols[1] == 0) return {};
  ChiSquareResult out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double expected = rows[i] * cols[j] / n;
      double diff = std::abs(static_cast<double>(table[i][j]) - expected);
      if (yates_correction) diff -= std::min(0.5, diff);
      out.statistic += diff * diff / expected;
    }
  }
  out.p_value = ChiSquare1Tail(out.statistic);
  return out;
}

}  // namespace qresp
