#include "qresp/candidate_filter.h"

#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.h"
#include "qresp/error.h"
#include "qresp/taxonomy.h"

namespace qresp {
namespace {

using Strings = std::vector<std::string>;

std::vector<Removal> Evaluate(std::string_view query, std::string_view candidate) {
  return EvaluateRules(query, candidate, DefaultRules(), &Gazetteer::Default());
}

bool Removed(std::string_view query, std::string_view candidate) {
  return !Evaluate(query, candidate).empty();
}

TEST(TokenDiffTest, WorkedExamples) {
  EXPECT_EQ(TokenDiff("singers", "female singers"), Strings{"female"});
  EXPECT_EQ(TokenDiff("American films", "American comedy films"), Strings{"comedy"});
  EXPECT_EQ(TokenDiff("X", "X"), Strings{});
}

TEST(TokenDiffTest, CaseInsensitiveAndOrderPreserving) {
  EXPECT_EQ(TokenDiff("action FILMS", "Action films of the 1990s"),
            (Strings{"of", "the", "1990s"}));
  EXPECT_EQ(TokenDiff("Films", "Films (French)"), Strings{"French"});
}

TEST(TokenizeTest, StripsSurroundingPunctuation) {
  EXPECT_EQ(Tokenize("  \"Hello,\"  world!  (x) "), (Strings{"Hello", "world", "x"}));
  EXPECT_EQ(Tokenize("U.S. films"), (Strings{"U.S", "films"}));
  EXPECT_EQ(Tokenize("--- ..."), Strings{});
}

TEST(DefaultRulesTest, IdsAndKinds) {
  const auto& rules = DefaultRules();
  ASSERT_EQ(rules.size(), 5u);
  EXPECT_EQ(rules[0].id(), "pattern#0");
  EXPECT_EQ(rules[0].payload(), "[0-9]{1,2}(st|th)(-| )century");
  EXPECT_EQ(rules[1].payload(), "1[0-9]{3}[^0-9]");
  EXPECT_EQ(rules[2].payload(), "[0-9]{3}[^0-9]");
  EXPECT_EQ(rules[3].id(), "term-list#3");
  EXPECT_EQ(rules[3].kind(), RuleKind::kTermList);
  EXPECT_EQ(rules[4].id(), "annotation-category#4");
}

TEST(FilterExamplesTest, CenturyPattern) {
  const auto r = Evaluate("Politicians", "19th century politicians");
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r[0].rule_id, "pattern#0");
  EXPECT_EQ(r[0].span, "19th century");
  EXPECT_TRUE(Removed("Politicians", "21st-century politicians"));
}

TEST(FilterExamplesTest, YearPattern) {
  const auto r = Evaluate("American television series", "1990s American television series");
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r[0].rule_id, "pattern#1");
  EXPECT_EQ(r[0].span, "1990s");
}

TEST(FilterExamplesTest, ThreeDigitPatternAtEndOfInput) {
  const auto r = Evaluate("People", "People born in 999");
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r[0].rule_id, "pattern#2");
  EXPECT_EQ(r[0].span, "999");
  const auto battles = Evaluate("Battles", "Battles of 850 AD");
  ASSERT_FALSE(battles.empty());
  EXPECT_EQ(battles[0].span, "850");
  // Two digits are not a year.
  EXPECT_FALSE(Removed("Films", "Films in 3D"));
}

TEST(FilterExamplesTest, GenderTerms) {
  const auto r = Evaluate("Politicians", "Male politicians");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].rule_id, "term-list#3");
  EXPECT_EQ(r[0].span, "Male");
  EXPECT_TRUE(Removed("singers", "female singers"));
  EXPECT_TRUE(Removed("Athletes", "Women athletes"));
  EXPECT_TRUE(Removed("Athletes", "Men's athletes") == false);
}

TEST(FilterExamplesTest, KeptWhenNoRuleFires) {
  EXPECT_FALSE(Removed("Action films", "Martial arts films"));
  EXPECT_FALSE(Removed("Action films", "Spy films"));
}

TEST(FilterExamplesTest, LocationsAndNationalities) {
  const auto r = Evaluate("Action films", "British action films");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].rule_id, "annotation-category#4");
  EXPECT_EQ(r[0].span, "British");
  EXPECT_TRUE(Removed("Novels", "Novels set in France"));
  EXPECT_TRUE(Removed("Rivers", "Rivers of South America"));
  EXPECT_TRUE(Removed("Films", "1990s films"));
}

TEST(FilterExamplesTest, DiffKeepRule) {
  // "American" already appears in the query, so it cannot trigger removal.
  EXPECT_TRUE(Evaluate("American films", "American comedy films").empty());
  EXPECT_TRUE(Evaluate("Women writers", "Women science fiction writers").empty());
  EXPECT_TRUE(Evaluate("19th century politicians", "19th century American politicians")
                  .size() == 1);
}

TEST(GazetteerTest, LongestPhraseFirst) {
  Gazetteer g;
  g.Add("new", "MISC");
  g.Add("new york", "GPE");
  FilterRule rule("annotation-category#0", RuleKind::kAnnotationCategory, "GPE");
  EXPECT_EQ(rule.MatchText("New York jazz", &g), "New York");
  FilterRule misc("annotation-category#1", RuleKind::kAnnotationCategory, "MISC");
  EXPECT_FALSE(misc.MatchText("New York jazz", &g).has_value());
  EXPECT_EQ(misc.MatchText("new wave", &g), "new");
}

TEST(GazetteerTest, LoadSkipsCommentsAndRejectsMissingTab) {
  std::istringstream ok("# c\n\nfrench\tNORP\n");
  const Gazetteer g = Gazetteer::Load(ok);
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.Lookup("FRENCH"), "NORP");
  std::istringstream bad("french NORP\n");
  EXPECT_THROW(Gazetteer::Load(bad), ParseError);
}

TEST(RuleLoadingTest, ParsesKindsAndAssignsIds) {
  std::istringstream in("# rules\npattern\t[0-9]+s\nterm-list\tboys, girls\n");
  const auto rules = LoadRules(in);
  ASSERT_EQ(rules.size(), 2u);
  EXPECT_EQ(rules[0].id(), "pattern#0");
  EXPECT_EQ(rules[1].id(), "term-list#1");
  EXPECT_EQ(rules[1].MatchText("Girls choirs", nullptr), "Girls");
}

TEST(RuleLoadingTest, BadRulesAreConfigErrors) {
  std::istringstream unknown("regex\tfoo\n");
  EXPECT_THROW(LoadRules(unknown), Error);
  std::istringstream bad_pattern("pattern\t([0-9\n");
  try {
    LoadRules(bad_pattern);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
  EXPECT_THROW(FilterRule("x", RuleKind::kTermList, "  "), Error);
}

TEST(ApplyFiltersTest, MissingGazetteerIsConfigError) {
  const Taxonomy t = testing::LoadActionFilms();
  const CandidatePool pool = BuildCandidatePool(t, t.TypeOrThrow("Action films"));
  try {
    ApplyFilters(t, pool, DefaultRules(), nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(ApplyFiltersTest, ActionFilmsPool) {
  const Taxonomy t = testing::LoadActionFilms();
  const CandidatePool pool = ApplyFilters(
      t, BuildCandidatePool(t, t.TypeOrThrow("Action films")), FilterConfig::Default());
  EXPECT_EQ(pool.all.size(), 16u);
  Strings kept;
  for (TypeId k : pool.kept) kept.push_back(t.TypeName(k));
  std::sort(kept.begin(), kept.end());
  EXPECT_EQ(kept, (Strings{"Action adventure films", "Action comedy films",
                           "Action films based on actual events", "Action thriller films",
                           "Animated action films", "Martial arts films",
                           "Science fiction action films", "Spy films", "The Purge films",
                           "Tomb Raider films"}));
  EXPECT_EQ(pool.removals.size(), pool.all.size() - pool.kept.size());
  for (const auto& [type, removals] : pool.removals) {
    EXPECT_FALSE(removals.empty());
    EXPECT_EQ(std::find(pool.kept.begin(), pool.kept.end(), type), pool.kept.end());
  }
}

TEST(ApplyFiltersTest, DisabledKeepsEverything) {
  const Taxonomy t = testing::LoadActionFilms();
  const CandidatePool pool = ApplyFilters(
      t, BuildCandidatePool(t, t.TypeOrThrow("Action films")), FilterConfig::Disabled());
  EXPECT_EQ(pool.kept, pool.all);
  EXPECT_TRUE(pool.removals.empty());
}

TEST(ApplyFiltersTest, TransitivePoolIncludesGrandchildren) {
  const Taxonomy t = testing::LoadActionFilms();
  const TypeId q = t.TypeOrThrow("Action films");
  EXPECT_EQ(BuildCandidatePool(t, q, true).all.size(), 21u);
}

// Removal records are sound: the recorded rule fires again on the recorded
// span alone.
TEST(ApplyFiltersTest, RemovalRecordsAreSound) {
  const Taxonomy t = testing::LoadActionFilms();
  const FilterConfig config = FilterConfig::Default();
  const CandidatePool pool =
      ApplyFilters(t, BuildCandidatePool(t, t.TypeOrThrow("Action films")), config);
  for (const auto& [type, removals] : pool.removals) {
    for (const Removal& r : removals) {
      const auto rule = std::find_if(config.rules.begin(), config.rules.end(),
                                     [&](const FilterRule& f) { return f.id() == r.rule_id; });
      ASSERT_NE(rule, config.rules.end());
      EXPECT_TRUE(rule->MatchText(r.span, config.gazetteer_ptr()).has_value())
          << t.TypeName(type) << " / " << r.rule_id;
    }
  }
}

// Adding a rule never grows the kept set.
TEST(ApplyFiltersTest, MonotoneInRules) {
  const Taxonomy t = testing::LoadActionFilms();
  const CandidatePool base = BuildCandidatePool(t, t.TypeOrThrow("Action films"));
  const auto& all_rules = DefaultRules();
  std::mt19937_64 rng(3);
  for (int round = 0; round < 30; ++round) {
    std::vector<FilterRule> some;
    for (const FilterRule& r : all_rules) {
      if (rng() % 2) some.push_back(r);
    }
    std::vector<FilterRule> more = some;
    more.push_back(all_rules[rng() % all_rules.size()]);
    const auto a = ApplyFilters(t, base, some, &Gazetteer::Default());
    const auto b = ApplyFilters(t, base, more, &Gazetteer::Default());
    for (TypeId k : b.kept) {
      EXPECT_NE(std::find(a.kept.begin(), a.kept.end(), k), a.kept.end());
    }
  }
}

TEST(FilterTraceTest, OneLinePerRemoval) {
  const Taxonomy t = testing::LoadActionFilms();
  const CandidatePool pool = ApplyFilters(
      t, BuildCandidatePool(t, t.TypeOrThrow("Action films")), FilterConfig::Default());
  std::size_t removals = 0;
  for (const auto& [type, r] : pool.removals) removals += r.size();
  const auto lines = FilterTraceLines(t, pool);
  ASSERT_EQ(lines.size(), removals);
  // Every firing rule gets a line, in rule order.
  std::vector<std::string> decade_rules;
  for (const auto& line : lines) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("query"), "Action films");
    if (j.at("candidate") == "1990s action films") {
      if (decade_rules.empty()) EXPECT_EQ(j.at("span"), "1990s");
      decade_rules.push_back(j.at("rule"));
    }
  }
  EXPECT_EQ(decade_rules, (std::vector<std::string>{"pattern#1", "pattern#2",
                                                    "annotation-category#4"}));
}

}  // namespace
}  // namespace qresp
