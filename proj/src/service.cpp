#include "topex/service.hpp"

#include <cstdio>
#include <cstdlib>
#include <exception>

#include "httplib.h"
#include "json.hpp"

namespace topex {

using ordered_json = nlohmann::ordered_json;

std::optional<std::string> experts_body(const RankedIndex& index, const std::string& slug,
                                        size_t limit) {
  if (!index.ranking_by_slug(slug)) return std::nullopt;
  ordered_json body;
  body["topicSlug"] = slug;
  ordered_json experts = ordered_json::array();
  for (const auto& entry : index.top_experts(slug, limit)) {
    ordered_json e;
    const std::string* handle = index.handle_of(entry.user);
    e["twitterUsername"] = handle ? *handle : entry.user;
    e["rank"] = entry.rank;
    experts.push_back(std::move(e));
  }
  body["experts"] = std::move(experts);
  return body.dump();
}

std::optional<std::string> user_topics_body(const RankedIndex& index, const std::string& username) {
  auto topics = index.user_topics(username);
  if (topics.empty()) return std::nullopt;
  ordered_json body;
  body["twitterUsername"] = username;
  body["topicSetType"] = "expertise";
  ordered_json set = ordered_json::array();
  for (const auto& t : topics) {
    ordered_json e;
    e["topicId"] = t.topic_id;
    e["topicSlug"] = t.slug;
    e["topicDisplayName"] = t.display_name;
    e["topicScore"] = t.percentile;
    set.push_back(std::move(e));
  }
  body["topicSet"] = std::move(set);
  return body.dump();
}

std::string error_body(const std::string& message) {
  ordered_json body;
  body["error"] = message;
  return body.dump();
}

ExpertService::ExpertService(RankedIndex index, std::string index_dir)
    : index_(std::make_shared<const RankedIndex>(std::move(index))),
      index_dir_(std::move(index_dir)) {}

std::shared_ptr<const RankedIndex> ExpertService::snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return index_;
}

void ExpertService::reload() {
  auto fresh = std::make_shared<const RankedIndex>(RankedIndex::load(index_dir_));
  std::lock_guard<std::mutex> lock(mutex_);
  index_ = std::move(fresh);
}

void ExpertService::install_routes(httplib::Server& server) {
  server.Get("/topics/:slug/experts", [this](const httplib::Request& req, httplib::Response& res) {
    size_t limit = 10;
    if (req.has_param("limit")) {
      const std::string raw = req.get_param_value("limit");
      char* end = nullptr;
      long v = std::strtol(raw.c_str(), &end, 10);
      if (raw.empty() || end != raw.c_str() + raw.size() || v < 0) {
        res.status = 400;
        res.set_content(error_body("limit must be a non-negative integer"), "application/json");
        return;
      }
      limit = static_cast<size_t>(v);
    }
    auto snap = snapshot();
    auto body = experts_body(*snap, req.path_params.at("slug"), limit);
    if (!body) {
      res.status = 404;
      res.set_content(error_body("unknown topic"), "application/json");
      return;
    }
    res.set_content(*body, "application/json");
  });

  server.Get("/users/:username/topics", [this](const httplib::Request& req, httplib::Response& res) {
    auto snap = snapshot();
    auto body = user_topics_body(*snap, req.path_params.at("username"));
    if (!body) {
      res.status = 404;
      res.set_content(error_body("unknown user"), "application/json");
      return;
    }
    res.set_content(*body, "application/json");
  });

  server.Post("/admin/reload", [this](const httplib::Request& req, httplib::Response& res) {
    const char* secret = std::getenv("TOPEX_RELOAD_SECRET");
    if (!secret || !*secret || req.get_header_value("X-Reload-Secret") != secret) {
      res.status = 403;
      res.set_content(error_body("reload not allowed"), "application/json");
      return;
    }
    try {
      reload();
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(error_body(e.what()), "application/json");
      return;
    }
    res.set_content("{\"reloaded\":true}", "application/json");
  });
}

int run_service(const ServiceOptions& options) {
  ExpertService service(RankedIndex::load(options.index_dir), options.index_dir);
  httplib::Server server;
  service.install_routes(server);
  std::fprintf(stderr, "serving index from %s on %s:%d\n", options.index_dir.c_str(),
               options.host.c_str(), options.port);
  if (!server.listen(options.host, options.port)) {
    std::fprintf(stderr, "failed to listen on %s:%d\n", options.host.c_str(), options.port);
    return 1;
  }
  return 0;
}

}  // namespace topex
