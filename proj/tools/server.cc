#include "server.h"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "qresp/dataset.h"
#include "qresp/error.h"
#include "qresp/taxonomy.h"
#include "session_store.h"

namespace qresp {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kDefaultTypeLimit = 20;
constexpr std::size_t kMaxTypeLimit = 1000;

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kState: return 409;
    case ErrorCode::kInvalidChoice: return 422;
    case ErrorCode::kContract:
    case ErrorCode::kPrecondition:
    case ErrorCode::kInstanceSize: return 422;
    default: return 400;
  }
}

void SendJson(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, std::string_view code,
               const std::string& message) {
  SendJson(res, status, Json{{"error", code}, {"message", message}});
}

std::optional<std::uint64_t> ParseUnsigned(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

Json ParseBody(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  Json body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::kDomain, "request body must be a JSON object");
  }
  return body;
}

std::string RequireString(const Json& body, const char* field) {
  if (!body.contains(field) || !body[field].is_string()) {
    throw Error(ErrorCode::kDomain, std::string("missing string field '") + field + "'");
  }
  return body[field].get<std::string>();
}

}  // namespace

struct Server::Impl {
  Impl(const Taxonomy& t, ServerOptions o)
      : taxonomy(t), options(std::move(o)), store(t, options.discovery, options.idle_timeout) {}

  Json NodeJson(DiscoverySession& session) const {
    const NodeOffer& offer = session.Offer();
    Json node;
    node["type"] = taxonomy.TypeName(session.current());
    node["answer_count"] = session.current_answers().size();
    Json offered = Json::array();
    if (offer.offered) {
      for (TypeId m : offer.offered->members) {
        offered.push_back(
            Json{{"name", taxonomy.TypeName(m)}, {"answer_count", taxonomy.Answers(m).size()}});
      }
    }
    node["offered"] = std::move(offered);
    node["terminal"] = offer.terminal;
    if (offer.offered) {
      node["status"] = SolveStatusName(offer.status);
      if (offer.cost) node["cost"] = offer.cost->total;
    }
    if (offer.terminal) {
      std::vector<std::string> names;
      session.current_answers().ForEach(
          [&](EntityId e) { names.push_back(taxonomy.EntityName(e)); });
      std::sort(names.begin(), names.end());
      node["entities"] = names;
    }
    return node;
  }

  static int NodeStatus(const Json& node, int ok) {
    return node.value("status", "") == "budget-exceeded" ? 503 : ok;
  }

  Json PathJson(const DiscoverySession& session) const {
    Json path = Json::array();
    path.push_back(taxonomy.TypeName(session.root()));
    for (const DiscoveryStep& step : session.path()) {
      path.push_back(taxonomy.TypeName(step.chosen));
    }
    return path;
  }

  // Runs a handler, turning library errors into HTTP error bodies.
  template <typename Fn>
  void Guard(httplib::Response& res, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      SendError(res, HttpStatus(e.code()), ErrorCodeName(e.code()), e.what());
    } catch (const std::exception& e) {
      SendError(res, 500, "internal", e.what());
    }
  }

  void Routes() {
    http.Get("/types", [this](const httplib::Request& req, httplib::Response& res) {
      Guard(res, [&] {
        const std::string prefix = req.get_param_value("prefix");
        std::size_t limit = kDefaultTypeLimit;
        if (req.has_param("limit")) {
          auto v = ParseUnsigned(req.get_param_value("limit"));
          if (!v) throw Error(ErrorCode::kDomain, "limit must be a non-negative integer");
          limit = static_cast<std::size_t>(std::min<std::uint64_t>(*v, kMaxTypeLimit));
        }
        Json out = Json::array();
        for (TypeId t : taxonomy.TypesWithPrefix(prefix, limit)) {
          out.push_back(Json{{"name", taxonomy.TypeName(t)},
                             {"answer_count", taxonomy.Answers(t).size()},
                             {"subtype_count", taxonomy.Children(t).size()}});
        }
        SendJson(res, 200, out);
      });
    });

    http.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      Guard(res, [&] {
        const Json body = ParseBody(req);
        const std::string query = RequireString(body, "query");
        std::optional<std::size_t> k;
        if (body.contains("k")) {
          if (!body["k"].is_number_unsigned() || body["k"].get<std::uint64_t>() == 0) {
            throw Error(ErrorCode::kDomain, "k must be a positive integer");
          }
          k = body["k"].get<std::size_t>();
        }
        const std::string id = store.Create(query, k);
        store.With(id, [&](DiscoverySession& s) {
          Json node = NodeJson(s);
          const int status = NodeStatus(node, 201);
          SendJson(res, status, Json{{"id", id}, {"node", std::move(node)}});
        });
      });
    });

    http.Post(R"(/sessions/([^/]+)/drill)",
              [this](const httplib::Request& req, httplib::Response& res) {
                Guard(res, [&] {
                  const std::string id = req.matches[1];
                  const Json body = ParseBody(req);
                  const std::string choice = RequireString(body, "choice");
                  store.With(id, [&](DiscoverySession& s) {
                    if (s.terminal()) {
                      throw Error(ErrorCode::kState, "node '" +
                                                         taxonomy.TypeName(s.current()) +
                                                         "' is terminal");
                    }
                    const auto t = taxonomy.FindType(choice);
                    if (!t) {
                      throw Error(ErrorCode::kInvalidChoice,
                                  "'" + choice + "' is not an offered refinement");
                    }
                    s.Drill(*t);
                    Json node = NodeJson(s);
                    const int status = NodeStatus(node, 200);
                    SendJson(res, status, node);
                  });
                });
              });

    http.Post(R"(/sessions/([^/]+)/back)",
              [this](const httplib::Request& req, httplib::Response& res) {
                Guard(res, [&] {
                  store.With(req.matches[1], [&](DiscoverySession& s) {
                    s.Back();
                    Json node = NodeJson(s);
                    const int status = NodeStatus(node, 200);
                    SendJson(res, status, node);
                  });
                });
              });

    http.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      Guard(res, [&] {
        const std::string id = req.matches[1];
        store.With(id, [&](DiscoverySession& s) {
          Json node = NodeJson(s);
          const int status = NodeStatus(node, 200);
          SendJson(res, status, Json{{"id", id}, {"path", PathJson(s)}, {"node", std::move(node)}});
        });
      });
    });

    http.Get(R"(/queries/(.+)/refinements)",
             [this](const httplib::Request& req, httplib::Response& res) {
               Guard(res, [&] {
                 const TypeId query = taxonomy.TypeOrThrow(req.matches[1].str());
                 PipelineConfig config;
                 config.k = options.discovery.k;
                 config.seed = options.seed;
                 config.transitive_candidates = options.discovery.transitive_candidates;
                 config.filters = options.discovery.filters;
                 config.solve = options.discovery.solve;
                 if (req.has_param("method")) {
                   config.method = ParseMethod(req.get_param_value("method"));
                 }
                 if (req.has_param("k")) {
                   auto v = ParseUnsigned(req.get_param_value("k"));
                   if (!v || *v == 0) throw Error(ErrorCode::kDomain, "k must be a positive integer");
                   config.k = static_cast<std::size_t>(*v);
                 }
                 if (req.has_param("seed")) {
                   auto v = ParseUnsigned(req.get_param_value("seed"));
                   if (!v) throw Error(ErrorCode::kDomain, "seed must be a non-negative integer");
                   config.seed = *v;
                 }
                 auto record = BuildRecord(taxonomy, config, query, "adhoc");
                 if (!record) {
                   SendError(res, 422, "infeasible",
                             "fewer than " + std::to_string(config.k) + " candidates for '" +
                                 taxonomy.TypeName(query) + "'");
                   return;
                 }
                 const int status =
                     record->status == SolveStatus::kBudgetExceeded ? 503 : 200;
                 SendJson(res, status, Json::parse(record->ToLine()));
               });
             });
  }

  const Taxonomy& taxonomy;
  ServerOptions options;
  SessionStore store;
  httplib::Server http;
};

Server::Server(const Taxonomy& taxonomy, ServerOptions options)
    : impl_(std::make_unique<Impl>(taxonomy, std::move(options))) {
  impl_->Routes();
  // httplib also sets SO_REUSEPORT by default, which would let a second
  // server share a port that is already taken.
  impl_->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
}

Server::~Server() = default;

int Server::Bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->http.bind_to_any_port(host);
  } else if (!impl_->http.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port));
  }
  return bound;
}

void Server::Run() { impl_->http.listen_after_bind(); }

void Server::Stop() { impl_->http.stop(); }

void Server::WaitUntilReady() const { impl_->http.wait_until_ready(); }

}  // namespace qresp
