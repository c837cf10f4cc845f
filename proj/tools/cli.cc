#include "cli.h"

#include <signal.h>

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qresp/candidate_filter.h"
#include "qresp/dataset.h"
#include "qresp/discovery.h"
#include "qresp/error.h"
#include "qresp/evaluation.h"
#include "qresp/optimizer.h"
#include "qresp/stats.h"
#include "qresp/taxonomy.h"
#include "server.h"

namespace qresp {
namespace {

using Json = nlohmann::ordered_json;

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return in;
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in = OpenInput(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> SplitCommas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

Table2x2 ParseTable(const std::string& text) {
  const auto cells = SplitCommas(text);
  if (cells.size() != 4) throw Error(ErrorCode::kDomain, "table needs four cells a,b,c,d");
  Table2x2 t{};
  for (std::size_t i = 0; i < 4; ++i) {
    try {
      std::size_t used = 0;
      t[i / 2][i % 2] = std::stoll(cells[i], &used);
      if (used != cells[i].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::kDomain, "bad table cell '" + cells[i] + "'");
    }
  }
  return t;
}

// Rejects a malformed --table while parsing, so it reports as a usage error.
const CLI::Validator& TableCells() {
  static const CLI::Validator v(
      [](std::string& text) -> std::string {
        try {
          ParseTable(text);
          return {};
        } catch (const Error& e) {
          return e.what();
        }
      },
      "A,B,C,D");
  return v;
}

struct TaxonomyArgs {
  std::string edges;
  std::string instances;
  bool drop_back_edges = false;

  void Register(CLI::App* app) {
    app->add_option("--edges", edges, "child<TAB>parent TSV")->required();
    app->add_option("--instances", instances, "entity<TAB>type TSV")->required();
    app->add_flag("--drop-back-edges", drop_back_edges,
                  "Break cycles by dropping edges instead of failing");
  }

  Taxonomy Load(LoadReport* report = nullptr) const {
    std::ifstream e = OpenInput(edges);
    std::ifstream i = OpenInput(instances);
    return Taxonomy::Load(e, i, LoadOptions{drop_back_edges}, report);
  }
};

struct FilterArgs {
  bool no_filters = false;
  bool transitive = false;
  std::string rules;
  std::string gazetteer;

  void Register(CLI::App* app) {
    app->add_flag("--no-filters", no_filters, "Keep every candidate");
    app->add_flag("--transitive", transitive, "Use all descendants as candidates");
    app->add_option("--rules", rules, "Filter rules file (kind<TAB>payload)");
    app->add_option("--gazetteer", gazetteer, "Gazetteer file (phrase<TAB>category)");
  }

  FilterConfig Config() const {
    if (no_filters) return FilterConfig::Disabled();
    FilterConfig config = FilterConfig::Default();
    if (!rules.empty()) {
      std::ifstream in = OpenInput(rules);
      config.rules = LoadRules(in);
    }
    if (!gazetteer.empty()) {
      std::ifstream in = OpenInput(gazetteer);
      config.gazetteer = Gazetteer::Load(in);
    }
    return config;
  }
};

struct SolveArgs {
  std::int64_t budget_ms = 5000;
  std::uint64_t node_limit = 0;

  void Register(CLI::App* app, std::int64_t default_budget) {
    budget_ms = default_budget;
    app->add_option("--budget-ms", budget_ms, "Solver time budget in milliseconds")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--node-limit", node_limit, "Stop the search after this many nodes");
  }

  SolveOptions Options() const {
    SolveOptions o;
    o.budget = std::chrono::milliseconds(budget_ms);
    if (node_limit > 0) o.node_limit = node_limit;
    return o;
  }
};

// Blocks SIGINT and SIGTERM for the calling thread and those it starts, and
// calls `on_signal` from a watcher thread when one arrives.
class SignalWatcher {
 public:
  explicit SignalWatcher(std::function<void()> on_signal) {
    sigemptyset(&set_);
    sigaddset(&set_, SIGINT);
    sigaddset(&set_, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set_, &old_);
    thread_ = std::thread([this, fn = std::move(on_signal)] {
      const timespec tick{0, 200'000'000};
      while (!done_.load()) {
        if (sigtimedwait(&set_, nullptr, &tick) > 0) {
          fn();
          return;
        }
      }
    });
  }
  ~SignalWatcher() {
    done_ = true;
    thread_.join();
    pthread_sigmask(SIG_SETMASK, &old_, nullptr);
  }

 private:
  sigset_t set_;
  sigset_t old_;
  std::atomic<bool> done_{false};
  std::thread thread_;
};

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {
    app_.require_subcommand(1);
    app_.add_option("--format", format_, "Output format")
        ->check(CLI::IsMember({"lines"}))
        ->capture_default_str();
    AddLoadCheck();
    AddSelect();
    AddBuildDataset();
    AddCompareCosts();
    AddSimulateDiscovery();
    AddEval();
    AddStats();
    AddServe();
  }

  int Run(const std::vector<std::string>& args) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app_.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out_ << app_.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app_.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n\n" << UsageFor(args);
      return kExitUsage;
    }
    try {
      action_();
      return exit_code_;
    } catch (const CLI::Error& e) {
      err_ << "error: " << e.what() << "\n\n" << UsageFor(args);
      return kExitUsage;
    } catch (const Error& e) {
      err_ << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << '\n';
      return kExitData;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      return kExitData;
    }
  }

 private:
  std::string UsageFor(const std::vector<std::string>& args) {
    for (CLI::App* sub : app_.get_subcommands({})) {
      if (!args.empty() && sub->get_name() == args.front()) return sub->help();
    }
    return app_.help();
  }

  void Emit(const std::string& line) { out_ << line << '\n'; }

  void AddLoadCheck() {
    auto* cmd = app_.add_subcommand("load-check", "Load a taxonomy and report its size");
    auto tax = std::make_shared<TaxonomyArgs>();
    tax->Register(cmd);
    cmd->callback([this, tax] {
      action_ = [this, tax] {
        LoadReport report;
        tax->Load(&report);
        for (const auto& line : report.ToLines()) Emit(line);
      };
    });
  }

  void AddSelect() {
    auto* cmd = app_.add_subcommand("select", "Choose k refinements for one query");
    struct Args {
      TaxonomyArgs tax;
      FilterArgs filters;
      SolveArgs solve;
      std::string query;
      std::size_t k = 5;
      bool exhaustive = false;
      bool trace_filters = false;
      bool timing = false;
    };
    auto a = std::make_shared<Args>();
    a->tax.Register(cmd);
    a->filters.Register(cmd);
    a->solve.Register(cmd, 5000);
    cmd->add_option("--query", a->query, "Query type name")->required();
    cmd->add_option("--k", a->k, "Number of refinements")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--exhaustive", a->exhaustive, "Score every k-subset instead of searching");
    cmd->add_flag("--trace-filters", a->trace_filters, "Print one line per filtered candidate");
    cmd->add_flag("--timing", a->timing, "Include wall time in the result line");
    cmd->callback([this, a] {
      action_ = [this, a] {
        const Taxonomy taxonomy = a->tax.Load();
        const TypeId query = taxonomy.TypeOrThrow(a->query);
        CandidatePool pool = ApplyFilters(
            taxonomy, BuildCandidatePool(taxonomy, query, a->filters.transitive),
            a->filters.Config());
        if (a->trace_filters) {
          for (const auto& line : FilterTraceLines(taxonomy, pool)) Emit(line);
        }
        const SolveResult result = a->exhaustive
                                       ? SolveExhaustive(taxonomy, pool, a->k)
                                       : Solve(taxonomy, pool, a->k, a->solve.Options());
        if (result.status == SolveStatus::kInfeasible) {
          throw Error(ErrorCode::kDomain,
                      "infeasible: '" + a->query + "' has " + std::to_string(pool.kept.size()) +
                          " candidate refinements, fewer than k=" + std::to_string(a->k));
        }
        Emit(SolveResultLine(taxonomy, query, result, a->timing));
      };
    });
  }

  void AddBuildDataset() {
    auto* cmd = app_.add_subcommand("build-dataset", "Build refinement records for every query");
    struct Args {
      TaxonomyArgs tax;
      FilterArgs filters;
      SolveArgs solve;
      PipelineConfig config;
      std::string method = "qresp";
      std::string output;
    };
    auto a = std::make_shared<Args>();
    a->tax.Register(cmd);
    a->filters.Register(cmd);
    a->solve.Register(cmd, 5000);
    auto& c = a->config;
    cmd->add_option("--method", a->method, "qresp, random or random-filtered")
        ->check(CLI::IsMember({"qresp", "random", "random-filtered"}))
        ->capture_default_str();
    cmd->add_option("--k", c.k, "Refinements per query")->capture_default_str();
    cmd->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
    cmd->add_option("--min-answers", c.min_answers_train, "Minimum answers of a training query")
        ->capture_default_str();
    cmd->add_option("--dev-min-subtypes", c.min_subtypes_dev,
                    "Subtypes a dev query needs above --dev-min-subtype-answers")
        ->capture_default_str();
    cmd->add_option("--dev-min-subtype-answers", c.min_answers_per_dev_subtype,
                    "Answers each counted dev subtype needs")
        ->capture_default_str();
    cmd->add_option("--dev-size", c.dev_sample_size, "Number of dev queries to sample")
        ->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker threads")->capture_default_str();
    cmd->add_option("--out,--output", a->output, "Output file (default: standard output)");
    cmd->callback([this, a] {
      action_ = [this, a] {
        const Taxonomy taxonomy = a->tax.Load();
        PipelineConfig config = a->config;
        config.method = ParseMethod(a->method);
        config.filters = a->filters.Config();
        config.transitive_candidates = a->filters.transitive;
        config.solve = a->solve.Options();
        config.Validate();
        const DevSelection dev = SelectDevQueries(taxonomy, config);
        if (dev.warning) err_ << "warning: " << *dev.warning << '\n';
        if (a->output.empty()) {
          WriteDataset(taxonomy, config, out_);
          return;
        }
        std::ofstream file(a->output, std::ios::binary | std::ios::trunc);
        if (!file) throw Error(ErrorCode::kIo, "cannot write '" + a->output + "'");
        WriteDataset(taxonomy, config, file);
      };
    });
  }

  void AddCompareCosts() {
    auto* cmd = app_.add_subcommand("compare-costs", "Pair two dataset runs by query");
    auto files = std::make_shared<std::pair<std::string, std::string>>();
    cmd->add_option("a", files->first, "Optimized run (JSON lines)")->required();
    cmd->add_option("b", files->second, "Baseline run (JSON lines)")->required();
    cmd->callback([this, files] {
      action_ = [this, files] {
        std::ifstream in_a = OpenInput(files->first);
        std::ifstream in_b = OpenInput(files->second);
        const auto a = ReadDatasetRecords(in_a);
        const auto b = ReadDatasetRecords(in_b);
        for (const auto& line : CompareCosts(a, b).ToLines()) Emit(line);
      };
    });
  }

  void AddSimulateDiscovery() {
    auto* cmd = app_.add_subcommand("simulate-discovery",
                                    "Count drill-downs needed to isolate target entities");
    struct Args {
      TaxonomyArgs tax;
      FilterArgs filters;
      SolveArgs solve;
      std::string query;
      std::vector<std::string> targets;
      std::size_t k = 5;
    };
    auto a = std::make_shared<Args>();
    a->tax.Register(cmd);
    a->filters.Register(cmd);
    a->solve.Register(cmd, 1000);
    cmd->add_option("--query", a->query, "Starting query")->required();
    cmd->add_option("--target", a->targets, "Target entity (default: every answer)");
    cmd->add_option("--k", a->k, "Refinements per node")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->callback([this, a] {
      action_ = [this, a] {
        const Taxonomy taxonomy = a->tax.Load();
        const TypeId query = taxonomy.TypeOrThrow(a->query);
        DiscoveryOptions options = DiscoveryOptions::ForSimulation(a->k);
        options.filters = a->filters.Config();
        options.transitive_candidates = a->filters.transitive;
        options.solve = a->solve.Options();
        std::vector<EntityId> targets;
        if (a->targets.empty()) {
          targets = taxonomy.Answers(query).ToVector();
        } else {
          for (const auto& name : a->targets) targets.push_back(taxonomy.EntityOrThrow(name));
        }
        std::size_t max_drills = 0;
        std::size_t total = 0;
        std::size_t unreached = 0;
        for (EntityId target : targets) {
          const SimulationResult r = SimulateDiscovery(taxonomy, query, target, options);
          std::vector<std::string> path;
          for (TypeId t : r.path) path.push_back(taxonomy.TypeName(t));
          Emit(Json{{"target", taxonomy.EntityName(target)},
                    {"drills", r.drills},
                    {"reached", r.reached},
                    {"path", path}}
                   .dump());
          max_drills = std::max(max_drills, r.drills);
          total += r.drills;
          unreached += !r.reached;
        }
        const std::size_t n = taxonomy.Answers(query).size();
        Json summary{{"record", "summary"},
                     {"query", a->query},
                     {"targets", targets.size()},
                     {"max_drills", max_drills},
                     {"mean_drills", targets.empty() ? 0.0
                                                     : static_cast<double>(total) /
                                                           static_cast<double>(targets.size())},
                     {"unreached", unreached}};
        if (a->k > 1 && n > 0) {
          summary["log_k_answers"] = std::log(static_cast<double>(n)) / std::log(static_cast<double>(a->k));
        }
        Emit(summary.dump());
      };
    });
  }

  void AddEval() {
    auto* cmd = app_.add_subcommand("eval", "Set metrics and the refinement-correction heuristic");
    cmd->require_subcommand(1);

    auto* prf = cmd->add_subcommand("prf", "Precision/recall/F1 of predicted against silver");
    auto prf_args = std::make_shared<std::tuple<std::string, std::string, bool>>();
    prf->add_option("--predicted", std::get<0>(*prf_args), "Predicted names or records")
        ->required();
    prf->add_option("--silver", std::get<1>(*prf_args), "Silver names or records")->required();
    prf->add_flag("--records", std::get<2>(*prf_args),
                  "Inputs are dataset records; score per query and average");
    prf->callback([this, prf_args] {
      action_ = [this, prf_args] {
        const auto& [predicted, silver, records] = *prf_args;
        if (!records) {
          const Prf p = SetPrf(ReadLines(predicted), ReadLines(silver));
          Emit(Json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}}.dump());
          return;
        }
        std::ifstream in_p = OpenInput(predicted);
        std::ifstream in_s = OpenInput(silver);
        std::map<std::string, std::vector<std::string>> gold;
        for (auto& r : ReadDatasetRecords(in_s)) gold[r.query] = std::move(r.refinements);
        double sp = 0, sr = 0, sf = 0;
        std::size_t count = 0;
        for (const auto& r : ReadDatasetRecords(in_p)) {
          auto it = gold.find(r.query);
          if (it == gold.end()) {
            throw Error(ErrorCode::kAlignment, "no silver record for '" + r.query + "'");
          }
          const Prf p = SetPrf(r.refinements, it->second);
          Emit(Json{{"query", r.query}, {"precision", p.precision}, {"recall", p.recall},
                    {"f1", p.f1}}
                   .dump());
          sp += p.precision;
          sr += p.recall;
          sf += p.f1;
          ++count;
        }
        if (count == 0) throw Error(ErrorCode::kEmptyInput, "no predicted records");
        const auto m = static_cast<double>(count);
        Emit(Json{{"record", "summary"}, {"queries", count}, {"precision", sp / m},
                  {"recall", sr / m}, {"f1", sf / m}}
                 .dump());
      };
    });

    struct EmbeddingArgs {
      std::string entities;
      std::string queries;
      double threshold = 0.4;
      void Register(CLI::App* app, bool required) {
        auto* e = app->add_option("--entity-embeddings", entities, "id<TAB>vector per entity");
        auto* q = app->add_option("--query-embeddings", queries, "id<TAB>vector per query");
        if (required) {
          e->required();
          q->required();
        }
        app->add_option("--threshold", threshold, "Cosine threshold")
            ->check(CLI::Range(-1.0, 1.0))
            ->capture_default_str();
      }
    };

    auto* predict = cmd->add_subcommand("predict", "Entities whose embedding matches a query");
    auto pa = std::make_shared<std::pair<EmbeddingArgs, std::string>>();
    pa->first.Register(predict, true);
    predict->add_option("--query", pa->second, "Query id")->required();
    predict->callback([this, pa] {
      action_ = [this, pa] {
        std::ifstream e = OpenInput(pa->first.entities);
        std::ifstream q = OpenInput(pa->first.queries);
        const EmbeddingTable entities = EmbeddingTable::Load(e);
        const EmbeddingTable queries = EmbeddingTable::Load(q);
        const auto ids =
            PredictAnswerIds(entities, queries, pa->second, PredictorConfig{pa->first.threshold});
        Emit(Json{{"query", pa->second}, {"threshold", pa->first.threshold}, {"answers", ids}}
                 .dump());
      };
    });

    auto* correction =
        cmd->add_subcommand("correction", "Confusion matrix of flags against human judgments");
    struct CorrectionArgs {
      EmbeddingArgs embeddings;
      TaxonomyArgs tax;
      std::string judgments;
      std::string flags;
      bool yates = false;
    };
    auto ca = std::make_shared<CorrectionArgs>();
    correction->add_option("--judgments", ca->judgments, "query<TAB>refinement<TAB>label")
        ->required();
    correction->add_option("--flags", ca->flags,
                           "Precomputed flags, one 0/1 per judgment line");
    ca->embeddings.Register(correction, false);
    correction->add_option("--edges", ca->tax.edges, "child<TAB>parent TSV");
    correction->add_option("--instances", ca->tax.instances, "entity<TAB>type TSV");
    correction->add_flag("--yates", ca->yates, "Apply the continuity correction");
    correction->callback([this, ca] {
      action_ = [this, ca] {
        std::ifstream jin = OpenInput(ca->judgments);
        const std::vector<Judgment> judgments = LoadJudgments(jin);
        std::vector<bool> flags;
        if (!ca->flags.empty()) {
          for (const auto& line : ReadLines(ca->flags)) {
            if (line != "0" && line != "1") {
              throw Error(ErrorCode::kDomain, "flag lines must be 0 or 1, got '" + line + "'");
            }
            flags.push_back(line == "1");
          }
        } else {
          if (ca->embeddings.entities.empty() || ca->embeddings.queries.empty() ||
              ca->tax.edges.empty() || ca->tax.instances.empty()) {
            throw CLI::RequiredError(
                "--flags or all of --entity-embeddings, --query-embeddings, --edges, "
                "--instances");
          }
          const Taxonomy taxonomy = ca->tax.Load();
          std::ifstream e = OpenInput(ca->embeddings.entities);
          std::ifstream q = OpenInput(ca->embeddings.queries);
          const EmbeddingTable entities = EmbeddingTable::Load(e);
          const EmbeddingTable queries = EmbeddingTable::Load(q);
          flags = FlagJudgedPairs(taxonomy, entities, queries, judgments,
                                  PredictorConfig{ca->embeddings.threshold});
        }
        Emit(MakeCorrectionReport(judgments, flags, ca->yates).ToLine());
      };
    });
  }

  void AddStats() {
    auto* cmd = app_.add_subcommand("stats", "Exact and asymptotic significance tests");
    cmd->require_subcommand(1);

    auto* binomial = cmd->add_subcommand("binomial", "Exact binomial test");
    struct BinomialArgs {
      std::uint64_t successes = 0;
      std::uint64_t trials = 0;
      double p0 = 0.5;
      std::string alternative = "greater";
    };
    auto ba = std::make_shared<BinomialArgs>();
    binomial->add_option("--successes", ba->successes)->required();
    binomial->add_option("--trials", ba->trials)->required();
    binomial->add_option("--p0", ba->p0)->capture_default_str();
    binomial->add_option("--alternative", ba->alternative)
        ->check(CLI::IsMember({"greater", "less", "two-sided"}))
        ->capture_default_str();
    binomial->callback([this, ba] {
      action_ = [this, ba] {
        const Alternative alt = ba->alternative == "greater" ? Alternative::kGreater
                                : ba->alternative == "less"  ? Alternative::kLess
                                                             : Alternative::kTwoSided;
        const double p = BinomialTest(ba->successes, ba->trials, ba->p0, alt);
        Emit(Json{{"test", "binomial"}, {"successes", ba->successes}, {"trials", ba->trials},
                  {"p0", ba->p0}, {"alternative", ba->alternative}, {"p_value", p}}
                 .dump());
      };
    });

    auto* fisher = cmd->add_subcommand("fisher", "Two-sided Fisher exact test on a 2x2 table");
    auto ft = std::make_shared<std::string>();
    fisher->add_option("--table", *ft, "Cells a,b,c,d of [[a,b],[c,d]]")
        ->required()
        ->check(TableCells());
    fisher->callback([this, ft] {
      action_ = [this, ft] {
        const double p = FisherExact2x2(ParseTable(*ft));
        Emit(Json{{"test", "fisher"}, {"table", *ft}, {"p_value", p}}.dump());
      };
    });

    auto* chi2 = cmd->add_subcommand("chi2", "Chi-square test of independence on a 2x2 table");
    auto ct = std::make_shared<std::pair<std::string, bool>>();
    chi2->add_option("--table", ct->first, "Cells a,b,c,d of [[a,b],[c,d]]")
        ->required()
        ->check(TableCells());
    chi2->add_flag("--yates", ct->second, "Apply the continuity correction");
    chi2->callback([this, ct] {
      action_ = [this, ct] {
        const ChiSquareResult r = ChiSquare2x2(ParseTable(ct->first), ct->second);
        Emit(Json{{"test", "chi2"}, {"table", ct->first}, {"yates_correction", ct->second},
                  {"statistic", r.statistic}, {"p_value", r.p_value}}
                 .dump());
      };
    });

    auto* kappa = cmd->add_subcommand("kappa", "Cohen's kappa between two label sequences");
    auto ka = std::make_shared<std::pair<std::string, std::string>>();
    kappa->add_option("--a", ka->first, "Comma-separated labels of rater a")->required();
    kappa->add_option("--b", ka->second, "Comma-separated labels of rater b")->required();
    kappa->callback([this, ka] {
      action_ = [this, ka] {
        const auto a = SplitCommas(ka->first);
        const auto b = SplitCommas(ka->second);
        const double k =
            CohenKappa<std::string>(std::span<const std::string>(a), std::span<const std::string>(b));
        Emit(Json{{"test", "kappa"}, {"items", a.size()}, {"kappa", k}}.dump());
      };
    });
  }

  void AddServe() {
    auto* cmd = app_.add_subcommand("serve", "Serve discovery sessions over HTTP");
    struct Args {
      TaxonomyArgs tax;
      FilterArgs filters;
      SolveArgs solve;
      std::string host = "127.0.0.1";
      int port = 8080;
      std::size_t k = 5;
      std::size_t listing_threshold = 10;
      std::int64_t idle_minutes = 30;
      std::uint64_t seed = 0;
    };
    auto a = std::make_shared<Args>();
    a->tax.Register(cmd);
    a->filters.Register(cmd);
    a->solve.Register(cmd, 1000);
    cmd->add_option("--host", a->host)->capture_default_str();
    cmd->add_option("--port", a->port, "0 picks a free port")
        ->check(CLI::Range(0, 65535))
        ->capture_default_str();
    cmd->add_option("--k", a->k, "Default refinements per node")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--listing-threshold", a->listing_threshold,
                    "Nodes with at most this many answers list them")
        ->capture_default_str();
    cmd->add_option("--idle-minutes", a->idle_minutes, "Session idle expiry")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", a->seed, "Default seed for random baselines")
        ->capture_default_str();
    cmd->callback([this, a] {
      action_ = [this, a] {
        LoadReport report;
        Taxonomy taxonomy = [&] {
          try {
            return a->tax.Load(&report);
          } catch (const Error&) {
            for (const auto& line : report.ToLines()) err_ << line << '\n';
            throw;
          }
        }();
        ServerOptions options;
        options.discovery.k = a->k;
        options.discovery.listing_threshold = a->listing_threshold;
        options.discovery.filters = a->filters.Config();
        options.discovery.transitive_candidates = a->filters.transitive;
        options.discovery.solve = a->solve.Options();
        options.idle_timeout = std::chrono::minutes(a->idle_minutes);
        options.seed = a->seed;
        Server server(taxonomy, std::move(options));
        const int port = server.Bind(a->host, a->port);
        SignalWatcher watcher([&server] { server.Stop(); });
        Emit(Json{{"record", "listening"}, {"host", a->host}, {"port", port}}.dump());
        out_.flush();
        server.Run();
        Emit(Json{{"record", "stopped"}}.dump());
      };
    });
  }

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_{"Refinement selection over entity-type taxonomies", "qresp"};
  std::string format_ = "lines";
  std::function<void()> action_;
  int exit_code_ = kExitOk;
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  return cli.Run(args);
}

}  // namespace qresp
