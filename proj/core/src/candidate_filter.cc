#include "qresp/candidate_filter.h"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "qresp/error.h"
#include "qresp/taxonomy.h"

namespace qresp {
namespace {

constexpr char kEndOfInput = '\x1f';

constexpr std::string_view kDefaultRules =
    "pattern\t[0-9]{1,2}(st|th)(-| )century\n"
    "pattern\t1[0-9]{3}[^0-9]\n"
    "pattern\t[0-9]{3}[^0-9]\n"
    "term-list\tmale,female,men,women\n"
    "annotation-category\tDATE,GPE,NORP,LOC\n";

constexpr std::string_view kDefaultGazetteer = R"(# demonyms and nationalities
american	NORP
british	NORP
english	NORP
scottish	NORP
welsh	NORP
irish	NORP
french	NORP
german	NORP
italian	NORP
spanish	NORP
portuguese	NORP
dutch	NORP
belgian	NORP
swiss	NORP
austrian	NORP
swedish	NORP
norwegian	NORP
danish	NORP
finnish	NORP
icelandic	NORP
polish	NORP
czech	NORP
hungarian	NORP
romanian	NORP
bulgarian	NORP
greek	NORP
turkish	NORP
russian	NORP
ukrainian	NORP
chinese	NORP
japanese	NORP
korean	NORP
south korean	NORP
north korean	NORP
indian	NORP
pakistani	NORP
bangladeshi	NORP
thai	NORP
vietnamese	NORP
filipino	NORP
indonesian	NORP
malaysian	NORP
australian	NORP
new zealand	NORP
canadian	NORP
mexican	NORP
brazilian	NORP
argentine	NORP
chilean	NORP
colombian	NORP
peruvian	NORP
nigerian	NORP
egyptian	NORP
south african	NORP
kenyan	NORP
ghanaian	NORP
ethiopian	NORP
moroccan	NORP
israeli	NORP
iranian	NORP
iraqi	NORP
saudi	NORP
european	NORP
african	NORP
asian	NORP
latin american	NORP
hong kong	GPE
# countries
united states	GPE
united kingdom	GPE
england	GPE
scotland	GPE
wales	GPE
ireland	GPE
france	GPE
germany	GPE
italy	GPE
spain	GPE
portugal	GPE
netherlands	GPE
belgium	GPE
switzerland	GPE
austria	GPE
sweden	GPE
norway	GPE
denmark	GPE
finland	GPE
poland	GPE
greece	GPE
turkey	GPE
russia	GPE
china	GPE
japan	GPE
korea	GPE
south korea	GPE
india	GPE
pakistan	GPE
thailand	GPE
vietnam	GPE
philippines	GPE
indonesia	GPE
australia	GPE
canada	GPE
mexico	GPE
brazil	GPE
argentina	GPE
nigeria	GPE
egypt	GPE
south africa	GPE
kenya	GPE
israel	GPE
iran	GPE
london	GPE
paris	GPE
new york	GPE
new york city	GPE
tokyo	GPE
# continents and regions
europe	LOC
asia	LOC
africa	LOC
north america	LOC
south america	LOC
oceania	LOC
antarctica	LOC
middle east	LOC
caribbean	LOC
)";

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> SplitCommaList(std::string_view payload) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= payload.size()) {
    std::size_t comma = payload.find(',', start);
    if (comma == std::string_view::npos) comma = payload.size();
    std::string item = Trim(payload.substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = comma + 1;
  }
  return out;
}

std::string Join(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

RuleKind ParseKind(std::string_view kind, std::size_t line_no) {
  if (kind == "pattern") return RuleKind::kPattern;
  if (kind == "term-list") return RuleKind::kTermList;
  if (kind == "annotation-category") return RuleKind::kAnnotationCategory;
  throw ParseError(line_no, "unknown rule kind '" + std::string(kind) + "'");
}

std::vector<FilterRule> ParseRules(std::istream& in) {
  std::vector<FilterRule> rules;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(line_no, "expected kind<TAB>payload");
    }
    const RuleKind kind = ParseKind(std::string_view(line).substr(0, tab), line_no);
    std::string id = std::string(RuleKindName(kind)) + "#" + std::to_string(rules.size());
    rules.emplace_back(std::move(id), kind, line.substr(tab + 1));
  }
  return rules;
}

}  // namespace

std::string_view RuleKindName(RuleKind kind) {
  switch (kind) {
    case RuleKind::kPattern: return "pattern";
    case RuleKind::kTermList: return "term-list";
    case RuleKind::kAnnotationCategory: return "annotation-category";
  }
  return "unknown";
}

Gazetteer Gazetteer::Load(std::istream& in) {
  Gazetteer g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(line_no, "expected token<TAB>category");
    }
    if (tab == 0 || tab + 1 == line.size()) throw ParseError(line_no, "empty field");
    g.Add(std::string_view(line).substr(0, tab), std::string_view(line).substr(tab + 1));
  }
  return g;
}

const Gazetteer& Gazetteer::Default() {
  static const Gazetteer kDefault = [] {
    std::istringstream in{std::string(kDefaultGazetteer)};
    Gazetteer g = Load(in);
    for (int decade = 1000; decade <= 2090; decade += 10) {
      g.Add(std::to_string(decade) + "s", "DATE");
    }
    return g;
  }();
  return kDefault;
}

void Gazetteer::Add(std::string_view phrase, std::string_view category) {
  std::vector<std::string> tokens = Tokenize(phrase);
  if (tokens.empty()) return;
  for (auto& t : tokens) t = Lower(t);
  max_tokens_ = std::max(max_tokens_, tokens.size());
  entries_[Join(tokens)] = std::string(category);
}

std::optional<std::string> Gazetteer::Lookup(std::string_view phrase) const {
  auto it = entries_.find(Lower(phrase));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

FilterRule::FilterRule(std::string id, RuleKind kind, std::string payload)
    : id_(std::move(id)), kind_(kind), payload_(std::move(payload)) {
  if (Trim(payload_).empty()) {
    throw Error(ErrorCode::kConfig, "rule " + id_ + " has an empty payload");
  }
  switch (kind_) {
    case RuleKind::kPattern:
      try {
        pattern_ = std::regex(payload_, std::regex::ECMAScript | std::regex::icase);
      } catch (const std::regex_error& e) {
        throw Error(ErrorCode::kConfig,
                    "rule " + id_ + ": invalid pattern '" + payload_ + "': " + e.what());
      }
      break;
    case RuleKind::kTermList:
      for (const std::string& item : SplitCommaList(payload_)) items_.push_back(Lower(item));
      break;
    case RuleKind::kAnnotationCategory:
      items_ = SplitCommaList(payload_);
      break;
  }
}

std::optional<std::string> FilterRule::Match(std::span<const std::string> added,
                                             const Gazetteer* gazetteer) const {
  switch (kind_) {
    case RuleKind::kPattern: {
      const std::string text = Join(added);
      // A trailing sentinel lets `[^0-9]` match at the end of the added text.
      const std::string subject = text + kEndOfInput;
      std::smatch m;
      if (!std::regex_search(subject, m, pattern_)) return std::nullopt;
      const std::size_t begin = std::min<std::size_t>(m.position(0), text.size());
      const std::size_t end = std::min<std::size_t>(m.position(0) + m.length(0), text.size());
      // The trailing non-digit may be the space before the next token.
      return Trim(std::string_view(text).substr(begin, end - begin));
    }
    case RuleKind::kTermList:
      for (const std::string& token : added) {
        if (std::find(items_.begin(), items_.end(), Lower(token)) != items_.end()) {
          return token;
        }
      }
      return std::nullopt;
    case RuleKind::kAnnotationCategory: {
      if (gazetteer == nullptr) {
        throw Error(ErrorCode::kConfig,
                    "rule " + id_ + " needs a gazetteer but none is loaded");
      }
      // Tag left to right; the longest known phrase at a position claims its
      // tokens, so "new" inside "new york" is never tagged on its own.
      std::size_t start = 0;
      while (start < added.size()) {
        const std::size_t longest =
            std::min(gazetteer->max_phrase_tokens(), added.size() - start);
        std::size_t claimed = 1;
        for (std::size_t len = longest; len >= 1; --len) {
          const std::string phrase = Join(added.subspan(start, len));
          auto category = gazetteer->Lookup(phrase);
          if (!category) continue;
          if (std::find(items_.begin(), items_.end(), *category) != items_.end()) {
            return phrase;
          }
          claimed = len;
          break;
        }
        start += claimed;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<std::string> FilterRule::MatchText(std::string_view text,
                                                 const Gazetteer* gazetteer) const {
  const std::vector<std::string> tokens = Tokenize(text);
  return Match(tokens, gazetteer);
}

std::vector<FilterRule> LoadRules(std::istream& in) { return ParseRules(in); }

const std::vector<FilterRule>& DefaultRules() {
  static const std::vector<FilterRule> kRules = [] {
    std::istringstream in{std::string(kDefaultRules)};
    return ParseRules(in);
  }();
  return kRules;
}

FilterConfig FilterConfig::Default() {
  FilterConfig config;
  config.rules = DefaultRules();
  config.gazetteer = Gazetteer::Default();
  return config;
}

FilterConfig FilterConfig::Disabled() {
  FilterConfig config;
  config.enabled = false;
  return config;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string_view token = text.substr(i, j - i);
    while (!token.empty() && std::ispunct(static_cast<unsigned char>(token.front()))) {
      token.remove_prefix(1);
    }
    while (!token.empty() && std::ispunct(static_cast<unsigned char>(token.back()))) {
      token.remove_suffix(1);
    }
    if (!token.empty()) tokens.emplace_back(token);
    i = j;
  }
  return tokens;
}

std::vector<std::string> TokenDiff(std::string_view query_name,
                                   std::string_view candidate_name) {
  std::unordered_set<std::string> query_tokens;
  for (const std::string& t : Tokenize(query_name)) query_tokens.insert(Lower(t));
  std::vector<std::string> added;
  for (std::string& t : Tokenize(candidate_name)) {
    if (!query_tokens.contains(Lower(t))) added.push_back(std::move(t));
  }
  return added;
}

CandidatePool BuildCandidatePool(const Taxonomy& taxonomy, TypeId query,
                                 bool transitive) {
  CandidatePool pool;
  pool.query = query;
  pool.all = taxonomy.Subtypes(query, transitive);
  pool.kept = pool.all;
  return pool;
}

std::vector<Removal> EvaluateRules(std::string_view query_name,
                                   std::string_view candidate_name,
                                   std::span<const FilterRule> rules,
                                   const Gazetteer* gazetteer) {
  const std::vector<std::string> added = TokenDiff(query_name, candidate_name);
  std::vector<Removal> removals;
  if (added.empty()) return removals;
  for (const FilterRule& rule : rules) {
    if (auto span = rule.Match(added, gazetteer)) {
      removals.push_back({rule.id(), std::move(*span)});
    }
  }
  return removals;
}

CandidatePool ApplyFilters(const Taxonomy& taxonomy, CandidatePool pool,
                           std::span<const FilterRule> rules,
                           const Gazetteer* gazetteer) {
  if (gazetteer == nullptr) {
    for (const FilterRule& rule : rules) {
      if (rule.kind() == RuleKind::kAnnotationCategory) {
        throw Error(ErrorCode::kConfig,
                    "rule " + rule.id() + " needs a gazetteer but none is loaded");
      }
    }
  }
  const std::string& query_name = taxonomy.TypeName(pool.query);
  pool.kept.clear();
  pool.removals.clear();
  for (TypeId candidate : pool.all) {
    std::vector<Removal> removals =
        EvaluateRules(query_name, taxonomy.TypeName(candidate), rules, gazetteer);
    if (removals.empty()) {
      pool.kept.push_back(candidate);
    } else {
      pool.removals.emplace(candidate, std::move(removals));
    }
  }
  return pool;
}

CandidatePool ApplyFilters(const Taxonomy& taxonomy, CandidatePool pool,
                           const FilterConfig& config) {
  if (!config.enabled) {
    pool.kept = pool.all;
    pool.removals.clear();
    return pool;
  }
  return ApplyFilters(taxonomy, std::move(pool), config.rules, config.gazetteer_ptr());
}

std::vector<std::string> FilterTraceLines(const Taxonomy& taxonomy,
                                          const CandidatePool& pool) {
  std::vector<std::string> lines;
  for (const auto& [candidate, removals] : pool.removals) {
    for (const Removal& r : removals) {
      nlohmann::ordered_json rec = {
          {"query", taxonomy.TypeName(pool.query)},
          {"candidate", taxonomy.TypeName(candidate)},
          {"rule", r.rule_id},
          {"span", r.span},
      };
      lines.push_back(rec.dump());
    }
  }
  return lines;
}

}  // namespace qresp
