#include "qresp/taxonomy.h"

#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "qresp/error.h"

namespace qresp {
namespace {

Taxonomy LoadStrings(const std::string& edges, const std::string& instances,
                     LoadOptions options = {}, LoadReport* report = nullptr) {
  std::istringstream e(edges), i(instances);
  return Taxonomy::Load(e, i, options, report);
}

std::set<std::string> AnswerNames(const Taxonomy& t, std::string_view type) {
  std::set<std::string> out;
  t.Answers(t.TypeOrThrow(type)).ForEach([&](EntityId e) { out.insert(t.EntityName(e)); });
  return out;
}

TEST(TaxonomyTest, ThreeTypeFixture) {
  const Taxonomy t = LoadStrings("B\tA\nC\tA\n",
                                 "e1\tB\ne2\tB\ne3\tB\ne3\tC\ne4\tC\ne5\tA\ne6\tA\n");
  EXPECT_EQ(t.type_count(), 3u);
  EXPECT_EQ(t.entity_count(), 6u);
  EXPECT_EQ(AnswerNames(t, "A"), (std::set<std::string>{"e1", "e2", "e3", "e4", "e5", "e6"}));
  EXPECT_EQ(AnswerNames(t, "B"), (std::set<std::string>{"e1", "e2", "e3"}));
  EXPECT_EQ(AnswerNames(t, "C"), (std::set<std::string>{"e3", "e4"}));
  EXPECT_EQ(t.DirectInstances(t.TypeOrThrow("A")).size(), 2u);
}

TEST(TaxonomyTest, DiamondClosureCountsSharedEntityOnce) {
  const Taxonomy t = LoadStrings("B\tA\nC\tA\nD\tB\nD\tC\n", "x\tD\ny\tB\n");
  EXPECT_EQ(AnswerNames(t, "A"), (std::set<std::string>{"x", "y"}));
  EXPECT_EQ(t.Answers(t.TypeOrThrow("A")).size(), 2u);
  EXPECT_EQ(AnswerNames(t, "C"), (std::set<std::string>{"x"}));
  EXPECT_EQ(t.Parents(t.TypeOrThrow("D")).size(), 2u);
  EXPECT_TRUE(t.IsStrictDescendant(t.TypeOrThrow("D"), t.TypeOrThrow("A")));
  EXPECT_FALSE(t.IsStrictDescendant(t.TypeOrThrow("A"), t.TypeOrThrow("A")));
  EXPECT_FALSE(t.IsStrictDescendant(t.TypeOrThrow("B"), t.TypeOrThrow("C")));
}

TEST(TaxonomyTest, SubtypesDirectAndTransitive) {
  const Taxonomy t = LoadStrings("B\tA\nC\tA\nD\tB\nD\tC\nE\tD\n", "x\tE\n");
  const TypeId a = t.TypeOrThrow("A");
  EXPECT_EQ(t.Subtypes(a).size(), 2u);
  const auto all = t.Subtypes(a, true);
  std::set<std::string> names;
  for (TypeId s : all) names.insert(t.TypeName(s));
  EXPECT_EQ(names, (std::set<std::string>{"B", "C", "D", "E"}));
  EXPECT_EQ(all.size(), 4u);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
}

TEST(TaxonomyTest, CommentsAndBlankLinesSkipped) {
  const Taxonomy t = LoadStrings("# header\n\nB\tA\n", "# e\ttype\n\ne1\tB\n");
  EXPECT_EQ(t.type_count(), 2u);
  EXPECT_EQ(t.entity_count(), 1u);
}

TEST(TaxonomyTest, NamesMayContainSpaces) {
  const Taxonomy t = LoadStrings("Martial arts films\tAction films\n",
                                 "Enter the Dragon\tMartial arts films\n");
  EXPECT_EQ(AnswerNames(t, "Action films"), (std::set<std::string>{"Enter the Dragon"}));
}

TEST(TaxonomyTest, WrongColumnCountNamesTheLine) {
  try {
    LoadStrings("B\tA\nbroken line\n", "");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
  EXPECT_THROW(LoadStrings("B\tA\tZ\n", ""), ParseError);
  EXPECT_THROW(LoadStrings("\tA\n", ""), ParseError);
  EXPECT_THROW(LoadStrings("", "e1\n"), ParseError);
}

TEST(TaxonomyTest, CycleFailsWithPath) {
  try {
    LoadStrings("B\tA\nA\tB\n", "");
    FAIL() << "expected cycle error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCycle);
    EXPECT_NE(std::string(e.what()).find("cycle detected"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("A"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("B"), std::string::npos);
  }
}

TEST(TaxonomyTest, SelfLoopIsACycle) {
  EXPECT_THROW(LoadStrings("A\tA\n", ""), Error);
}

TEST(TaxonomyTest, DropBackEdgesRemovesChildThatSortsLast) {
  LoadReport report;
  const Taxonomy t =
      LoadStrings("B\tA\nC\tB\nA\tC\n", "x\tC\n", LoadOptions{true}, &report);
  ASSERT_EQ(report.dropped_edges.size(), 1u);
  EXPECT_EQ(report.dropped_edges[0].child, "C");
  EXPECT_EQ(report.dropped_edges[0].parent, "B");
  // With C -> B gone, C is a root and nothing reaches A or B from it.
  EXPECT_EQ(AnswerNames(t, "C"), (std::set<std::string>{"x"}));
  EXPECT_TRUE(AnswerNames(t, "A").empty());
  EXPECT_TRUE(AnswerNames(t, "B").empty());
  EXPECT_EQ(t.edges().size(), 2u);
  const auto lines = report.ToLines();
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_NE(lines[1].find("dropped_edge"), std::string::npos);
}

TEST(TaxonomyTest, LoadReportCounts) {
  LoadReport report;
  LoadStrings("B\tA\nB\tA\nC\tA\n", "e\tB\ne\tB\nf\tC\n", {}, &report);
  EXPECT_EQ(report.types, 3u);
  EXPECT_EQ(report.entities, 2u);
  EXPECT_EQ(report.edges, 2u);
  EXPECT_EQ(report.instances, 2u);
}

TEST(TaxonomyTest, UnknownNamesThrowNotFound) {
  const Taxonomy t = LoadStrings("B\tA\n", "");
  EXPECT_FALSE(t.FindType("Z").has_value());
  try {
    t.TypeOrThrow("Z");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  EXPECT_THROW(t.EntityOrThrow("nobody"), Error);
}

TEST(TaxonomyTest, PrefixSearchInNameOrder) {
  const Taxonomy t = testing::LoadActionFilms();
  const auto hits = t.TypesWithPrefix("Action", 10);
  std::vector<std::string> names;
  for (TypeId h : hits) names.push_back(t.TypeName(h));
  EXPECT_EQ(names, (std::vector<std::string>{"Action adventure films", "Action comedy films",
                                             "Action films", "Action films about women",
                                             "Action films based on actual events",
                                             "Action thriller films"}));
  EXPECT_EQ(t.TypesWithPrefix("Action", 2).size(), 2u);
  EXPECT_TRUE(t.TypesWithPrefix("Zzz", 5).empty());
}

TEST(TaxonomyTest, WriteAndReloadIsIdentity) {
  const Taxonomy t = testing::LoadActionFilms();
  std::ostringstream e, i;
  t.WriteEdges(e);
  t.WriteInstances(i);
  const Taxonomy u = LoadStrings(e.str(), i.str());
  ASSERT_EQ(u.type_count(), t.type_count());
  ASSERT_EQ(u.entity_count(), t.entity_count());
  for (std::uint32_t v = 0; v < t.type_count(); ++v) {
    EXPECT_EQ(u.TypeName(TypeId{v}), t.TypeName(TypeId{v}));
    EXPECT_EQ(u.Answers(TypeId{v}), t.Answers(TypeId{v}));
  }
}

// Closure against a brute-force oracle: entity e answers type t iff e is a
// direct instance of t or of some type from which t is reachable upward.
TEST(TaxonomyTest, ClosureMatchesReachabilityOracle) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 40; ++round) {
    const int types = 2 + static_cast<int>(rng() % 25);
    const int entities = 1 + static_cast<int>(rng() % 40);
    std::vector<std::pair<std::string, std::string>> edges, instances;
    std::vector<std::set<int>> parents(types);
    // Edges only from higher to lower index keep the graph acyclic.
    for (int c = 1; c < types; ++c) {
      for (int p = 0; p < c; ++p) {
        if (rng() % 4 == 0) {
          edges.emplace_back("T" + std::to_string(c), "T" + std::to_string(p));
          parents[c].insert(p);
        }
      }
    }
    std::vector<std::set<int>> direct(types);
    for (int e = 0; e < entities; ++e) {
      const int k = static_cast<int>(rng() % 3);
      for (int j = 0; j < k; ++j) {
        const int t = static_cast<int>(rng() % types);
        instances.emplace_back("E" + std::to_string(e), "T" + std::to_string(t));
        direct[t].insert(e);
      }
    }
    TaxonomyBuilder b;
    for (int t = 0; t < types; ++t) b.InternType("T" + std::to_string(t));
    for (const auto& [c, p] : edges) b.AddEdge(c, p);
    for (const auto& [e, t] : instances) b.AddInstance(e, t);
    const Taxonomy tax = std::move(b).Build();

    auto ancestors = [&](int t) {
      std::set<int> seen;
      std::vector<int> stack{t};
      while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        if (!seen.insert(x).second) continue;
        for (int p : parents[x]) stack.push_back(p);
      }
      return seen;
    };
    std::vector<std::set<std::string>> expected(types);
    for (int t = 0; t < types; ++t) {
      for (int a : ancestors(t)) {
        for (int e : direct[t]) expected[a].insert("E" + std::to_string(e));
      }
    }
    for (int t = 0; t < types; ++t) {
      EXPECT_EQ(AnswerNames(tax, "T" + std::to_string(t)), expected[t]) << "round " << round;
      for (int u = 0; u < types; ++u) {
        const bool oracle = u != t && ancestors(u).contains(t);
        EXPECT_EQ(tax.IsStrictDescendant(tax.TypeOrThrow("T" + std::to_string(u)),
                                         tax.TypeOrThrow("T" + std::to_string(t))),
                  oracle);
      }
    }
  }
}

}  // namespace
}  // namespace qresp
