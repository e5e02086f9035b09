#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "topex/rank.hpp"

namespace httplib {
class Server;
}

namespace topex {

// Pure response builders; the HTTP layer is a thin shell around these.
// Returned strings are canonical JSON bodies. nullopt means not found.
std::optional<std::string> experts_body(const RankedIndex& index, const std::string& slug,
                                        size_t limit);
std::optional<std::string> user_topics_body(const RankedIndex& index, const std::string& username);
std::string error_body(const std::string& message);

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string index_dir;
  // Reload secret comes from the TOPEX_RELOAD_SECRET environment variable;
  // when unset the reload endpoint is disabled.
};

// Read-only expert API over an immutable index snapshot.
//   GET  /topics/{slug}/experts?limit=k
//   GET  /users/{username}/topics
//   POST /admin/reload            (X-Reload-Secret header must match)
class ExpertService {
 public:
  ExpertService(RankedIndex index, std::string index_dir);

  void install_routes(httplib::Server& server);

  // Swaps in a freshly loaded snapshot; readers see old or new, never a mix.
  void reload();

  std::shared_ptr<const RankedIndex> snapshot() const;

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const RankedIndex> index_;
  std::string index_dir_;
};

// Blocking listen loop; returns the exit code for main.
int run_service(const ServiceOptions& options);

}  // namespace topex
