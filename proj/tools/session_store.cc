#include "session_store.h"

#include <cstdio>

#include "qresp/error.h"
#include "qresp/taxonomy.h"

namespace qresp {

SessionStore::SessionStore(const Taxonomy& taxonomy, DiscoveryOptions defaults,
                           std::chrono::seconds idle_timeout,
                           std::function<Clock::time_point()> now)
    : taxonomy_(taxonomy),
      defaults_(std::move(defaults)),
      idle_timeout_(idle_timeout),
      now_(std::move(now)) {}

std::string SessionStore::Create(std::string_view query, std::optional<std::size_t> k) {
  const TypeId root = taxonomy_.TypeOrThrow(query);
  DiscoveryOptions options = defaults_;
  if (k) options.k = *k;
  Sweep();
  std::string id;
  {
    std::lock_guard<std::mutex> lock(mu_);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "s%06llu", static_cast<unsigned long long>(next_id_++));
    id = buf;
  }
  auto entry = std::make_shared<Entry>(
      DiscoverySession::Start(taxonomy_, root, std::move(options), id), now_());
  std::lock_guard<std::mutex> lock(mu_);
  sessions_.emplace(id, std::move(entry));
  return id;
}

void SessionStore::With(const std::string& id,
                        const std::function<void(DiscoverySession&)>& fn) {
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end() || now_() - it->second->last_used.load() > idle_timeout_) {
      if (it != sessions_.end()) sessions_.erase(it);
      throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'");
    }
    entry = it->second;
    entry->last_used = now_();
  }
  std::lock_guard<std::mutex> lock(entry->mu);
  fn(entry->session);
  entry->last_used = now_();
}

std::size_t SessionStore::Sweep() {
  std::lock_guard<std::mutex> lock(mu_);
  const auto now = now_();
  return std::erase_if(sessions_, [&](const auto& kv) {
    return now - kv.second->last_used.load() > idle_timeout_;
  });
}

std::size_t SessionStore::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sessions_.size();
}

}  // namespace qresp
