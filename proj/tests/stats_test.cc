#include "qresp/stats.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qresp/error.h"
#include "stat_oracles.h"

namespace qresp {
namespace {

using testing::BinomialHalfOracle;
using testing::Choose;
using testing::FisherOracle;

// General p0 via exact rationals p0 = a/b with small a, b.
double BinomialRationalOracle(std::uint64_t s, std::uint64_t n, std::uint64_t a,
                              std::uint64_t b, Alternative alt) {
  std::vector<long double> w(n + 1);
  for (std::uint64_t i = 0; i <= n; ++i) {
    w[i] = static_cast<long double>(Choose(n, i)) *
           std::pow(static_cast<long double>(a), static_cast<long double>(i)) *
           std::pow(static_cast<long double>(b - a), static_cast<long double>(n - i));
  }
  long double num = 0;
  for (std::uint64_t i = 0; i <= n; ++i) {
    const bool in = alt == Alternative::kGreater ? i >= s
                    : alt == Alternative::kLess  ? i <= s
                                                 : w[i] <= w[s] * (1 + 1e-12L);
    if (in) num += w[i];
  }
  return static_cast<double>(num / std::pow(static_cast<long double>(b), static_cast<long double>(n)));
}

void ExpectRelative(double got, double want, double tol = 1e-9) {
  EXPECT_LE(std::abs(got - want), tol * std::max(std::abs(want), 1e-300))
      << "got " << got << " want " << want;
}

TEST(BinomialTest, NamedFixtures) {
  ExpectRelative(BinomialTest(10, 10), std::ldexp(1.0, -10));
  EXPECT_EQ(BinomialTest(0, 10, 0.5, Alternative::kGreater), 1.0);
  ExpectRelative(BinomialTest(7, 10), 0.171875);
}

TEST(BinomialTest, SuccessesAboveTrialsIsDomainError) {
  try {
    BinomialTest(11, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
  EXPECT_THROW(BinomialTest(1, 2, 1.5), Error);
}

TEST(BinomialTest, MatchesIntegerOracleUpToForty) {
  for (std::uint64_t n = 0; n <= 40; ++n) {
    for (std::uint64_t s = 0; s <= n; ++s) {
      for (Alternative alt : {Alternative::kGreater, Alternative::kLess, Alternative::kTwoSided}) {
        ExpectRelative(BinomialTest(s, n, 0.5, alt), BinomialHalfOracle(s, n, alt));
      }
    }
  }
}

TEST(BinomialTest, NonHalfRatesMatchRationalOracle) {
  for (std::uint64_t n = 1; n <= 30; ++n) {
    for (std::uint64_t s = 0; s <= n; ++s) {
      for (auto [a, b] : {std::pair<std::uint64_t, std::uint64_t>{1, 4}, {2, 3}, {1, 10}}) {
        for (Alternative alt : {Alternative::kGreater, Alternative::kLess, Alternative::kTwoSided}) {
          const double want = BinomialRationalOracle(s, n, a, b, alt);
          if (want < 1e-12) continue;
          ExpectRelative(BinomialTest(s, n, static_cast<double>(a) / b, alt), want, 1e-9);
        }
      }
    }
  }
}

TEST(BinomialTest, LargeTrialsStayAccurate) {
  // Symmetry: P(X >= 60 | n=100) equals P(X <= 40 | n=100).
  ExpectRelative(BinomialTest(60, 100), BinomialTest(40, 100, 0.5, Alternative::kLess), 1e-9);
  EXPECT_NEAR(BinomialTest(60, 100), 0.028443966820490392, 1e-12);
}

TEST(FisherTest, NamedFixtures) {
  ExpectRelative(FisherExact2x2({{{3, 1}, {1, 3}}}), 34.0 / 70.0);
  ExpectRelative(FisherExact2x2({{{5, 0}, {0, 5}}}), 2.0 / 252.0);
  EXPECT_EQ(FisherExact2x2({{{0, 0}, {4, 2}}}), 1.0);
  EXPECT_EQ(FisherExact2x2({{{3, 0}, {2, 0}}}), 1.0);
}

TEST(FisherTest, NegativeCellIsDomainError) {
  EXPECT_THROW(FisherExact2x2({{{-1, 2}, {3, 4}}}), Error);
}

TEST(FisherTest, MatchesEnumerationOnEveryTableUpToForty) {
  std::size_t tables = 0;
  for (std::int64_t a = 0; a <= 40; ++a) {
    for (std::int64_t b = 0; a + b <= 40; ++b) {
      for (std::int64_t c = 0; a + b + c <= 40; ++c) {
        for (std::int64_t d = 0; a + b + c + d <= 40; d += 1 + (a + b + c) % 3) {
          const Table2x2 t{{{a, b}, {c, d}}};
          const bool degenerate = a + b == 0 || c + d == 0 || a + c == 0 || b + d == 0;
          const double want = degenerate ? 1.0 : FisherOracle(t);
          ExpectRelative(FisherExact2x2(t), want);
          ++tables;
        }
      }
    }
  }
  EXPECT_GT(tables, 50000u);
}

TEST(ChiSquareTest, NamedFixture) {
  const ChiSquareResult r = ChiSquare2x2({{{20, 30}, {30, 20}}});
  ExpectRelative(r.statistic, 4.0);
  EXPECT_NEAR(r.p_value, 0.0455, 1e-3);
  ExpectRelative(r.p_value, 0.04550026389635857);
}

TEST(ChiSquareTest, YatesCorrection) {
  // |O - E| = 5 everywhere; corrected (4.5)^2 / 25 * 4 = 3.24.
  const ChiSquareResult r = ChiSquare2x2({{{20, 30}, {30, 20}}}, true);
  ExpectRelative(r.statistic, 3.24);
  ExpectRelative(r.p_value, std::erfc(std::sqrt(3.24 / 2)));
}

TEST(ChiSquareTest, ZeroMarginGivesNoEvidence) {
  const ChiSquareResult r = ChiSquare2x2({{{0, 0}, {3, 4}}});
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

// Statistic by hand expansion in exact rationals, p via the same tail.
TEST(ChiSquareTest, MatchesHandExpansionUpToForty) {
  for (std::int64_t a = 0; a <= 20; ++a) {
    for (std::int64_t b = 0; b <= 20 - a; ++b) {
      for (std::int64_t c = 0; c <= 20; ++c) {
        for (std::int64_t d = 0; d <= 20 - c; ++d) {
          const std::int64_t n = a + b + c + d;
          const std::int64_t r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;
          if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) continue;
          // Pearson's statistic for 2x2 equals n (ad - bc)^2 / (r1 r2 c1 c2).
          const double det = static_cast<double>(a * d - b * c);
          const double want = static_cast<double>(n) * det * det /
                              (static_cast<double>(r1) * r2 * c1 * c2);
          const ChiSquareResult r = ChiSquare2x2({{{a, b}, {c, d}}});
          if (want == 0) {
            EXPECT_NEAR(r.statistic, 0.0, 1e-12);
          } else {
            ExpectRelative(r.statistic, want);
          }
        }
      }
    }
  }
}

TEST(ChiSquareTest, TailAgreesWithReferenceValues) {
  ExpectRelative(ChiSquare1Tail(3.8414588206941285), 0.05);
  ExpectRelative(ChiSquare1Tail(6.634896601021217), 0.01);
  ExpectRelative(ChiSquare1Tail(1.0), 0.31731050786291115);
  EXPECT_EQ(ChiSquare1Tail(0.0), 1.0);
}

TEST(CohenKappaTest, IdenticalSequences) {
  const std::vector<int> a{1, 0, 1, 2, 0};
  EXPECT_DOUBLE_EQ(CohenKappa<int>(a, a), 1.0);
}

TEST(CohenKappaTest, SingleSharedClassIsOne) {
  const std::vector<int> a{1, 1, 1};
  EXPECT_DOUBLE_EQ(CohenKappa<int>(a, a), 1.0);
}

TEST(CohenKappaTest, FiveItemFixture) {
  // Agreement on 4 of 5 items: p_o = 0.8. Marginals: rater a says 1 three
  // times, rater b twice, so p_e = 0.6 * 0.4 + 0.4 * 0.6 = 0.48 and
  // kappa = 0.32 / 0.52.
  const std::vector<int> a{1, 1, 0, 0, 1};
  const std::vector<int> b{1, 0, 0, 0, 1};
  EXPECT_NEAR(CohenKappa<int>(a, b), 0.32 / 0.52, 1e-12);
  EXPECT_NEAR(CohenKappa<int>(a, b), 0.6153846153846154, 1e-12);
}

TEST(CohenKappaTest, Errors) {
  const std::vector<int> a{1, 0}, b{1};
  try {
    CohenKappa<int>(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
  const std::vector<int> empty;
  EXPECT_THROW(CohenKappa<int>(empty, empty), Error);
}

TEST(CohenKappaTest, IndependentRatersNearZero) {
  std::mt19937_64 rng(4);
  std::vector<int> a, b;
  for (int i = 0; i < 200000; ++i) {
    a.push_back(static_cast<int>(rng() % 3));
    b.push_back(static_cast<int>(rng() % 3));
  }
  EXPECT_NEAR(CohenKappa<int>(a, b), 0.0, 0.01);
}

// Against a direct count on every pair of binary sequences of length 6.
TEST(CohenKappaTest, MatchesDirectCountOnAllShortSequences) {
  const int len = 6;
  for (int ma = 0; ma < (1 << len); ++ma) {
    for (int mb = 0; mb < (1 << len); ++mb) {
      std::vector<int> a, b;
      int agree = 0, a1 = 0, b1 = 0;
      for (int i = 0; i < len; ++i) {
        a.push_back((ma >> i) & 1);
        b.push_back((mb >> i) & 1);
        agree += a.back() == b.back();
        a1 += a.back();
        b1 += b.back();
      }
      // In units of 1/len^2: p_o * 36, p_e * 36.
      const int po = agree * len;
      const int pe = a1 * b1 + (len - a1) * (len - b1);
      const double want = pe == len * len ? 1.0
                                          : static_cast<double>(po - pe) / (len * len - pe);
      EXPECT_NEAR(CohenKappa<int>(a, b), want, 1e-12);
    }
  }
}

}  // namespace
}  // namespace qresp
