#ifndef QRESP_TOOLS_SESSION_STORE_H_
#define QRESP_TOOLS_SESSION_STORE_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "qresp/discovery.h"

namespace qresp {

// Live discovery sessions keyed by id. Ids are never reused within a process.
// Work on one session is serialized through With(); different sessions
// proceed in parallel.
class SessionStore {
 public:
  using Clock = std::chrono::steady_clock;

  SessionStore(const Taxonomy& taxonomy, DiscoveryOptions defaults,
               std::chrono::seconds idle_timeout = std::chrono::minutes(30),
               std::function<Clock::time_point()> now = Clock::now);

  // Starts a session at `query`. k overrides the default when set. Throws
  // like DiscoverySession::Start.
  std::string Create(std::string_view query, std::optional<std::size_t> k);

  // Runs fn with exclusive access to the session. Throws Error(kNotFound) for
  // an unknown or expired id.
  void With(const std::string& id, const std::function<void(DiscoverySession&)>& fn);

  // Drops sessions idle for longer than the timeout; returns how many.
  std::size_t Sweep();
  std::size_t size() const;

 private:
  struct Entry {
    Entry(DiscoverySession s, Clock::time_point t) : session(std::move(s)), last_used(t) {}
    std::mutex mu;
    DiscoverySession session;
    std::atomic<Clock::time_point> last_used;
  };

  const Taxonomy& taxonomy_;
  DiscoveryOptions defaults_;
  std::chrono::seconds idle_timeout_;
  std::function<Clock::time_point()> now_;

  mutable std::mutex mu_;
  std::uint64_t next_id_ = 1;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace qresp

#endif  // QRESP_TOOLS_SESSION_STORE_H_
