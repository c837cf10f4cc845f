#ifndef QRESP_TOOLS_SERVER_H_
#define QRESP_TOOLS_SERVER_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "qresp/discovery.h"

namespace qresp {

class Taxonomy;

struct ServerOptions {
  DiscoveryOptions discovery;
  std::chrono::seconds idle_timeout = std::chrono::minutes(30);
  // Seed for /queries/{name}/refinements when the request names none.
  std::uint64_t seed = 0;
};

// The HTTP interface used by the explorer UI. Bodies are JSON; errors come
// back as {"error": code, "message": text}.
//
//   GET  /types?prefix=P&limit=N
//   POST /sessions                {query, k?}
//   POST /sessions/{id}/drill     {choice}
//   POST /sessions/{id}/back
//   GET  /sessions/{id}
//   GET  /queries/{name}/refinements?method=M&k=K&seed=S
class Server {
 public:
  Server(const Taxonomy& taxonomy, ServerOptions options);
  ~Server();

  // Binds the listening socket and returns the port, which is chosen by the
  // system when `port` is 0. Throws Error(kIo) if binding fails.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); in-flight requests finish before it returns.
  void Run();
  void Stop();
  // Blocks until Run() is accepting connections.
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qresp

#endif  // QRESP_TOOLS_SERVER_H_
