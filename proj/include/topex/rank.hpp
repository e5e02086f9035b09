#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "topex/model.hpp"
#include "topex/ontology.hpp"

namespace topex {

struct RankEntry {
  std::string user;
  double score = 0.0;
  size_t rank = 0;        // 1-based, contiguous
  double percentile = 0;  // 1 - rank/(count+1), in (0, 1)
};

struct UserTopicEntry {
  std::string topic_id;
  std::string slug;
  std::string display_name;
  double percentile = 0.0;
};

// Immutable per-topic rankings plus the per-user view; built offline and
// swapped atomically under the service.
class RankedIndex {
 public:
  // Scores must be positive; sorting is stable: score descending, user id
  // ascending on ties. Handles map user ids to public usernames; users
  // without an entry answer to their id.
  static RankedIndex build(const std::vector<ScoreRow>& scores, const TopicOntology& ont,
                           const std::map<std::string, std::string>& handles);

  const std::vector<RankEntry>* ranking_by_slug(const std::string& slug) const;

  // First min(k, count) entries; nullopt-like empty when the slug is unknown
  // (distinguished via ranking_by_slug).
  std::vector<RankEntry> top_experts(const std::string& slug, size_t k) const;

  // All topics where the user (by public username) holds a positive score,
  // percentile descending, ties by slug. Empty when unknown or unscored.
  std::vector<UserTopicEntry> user_topics(const std::string& username) const;

  const std::string* handle_of(const std::string& user) const;
  size_t topic_count() const { return rankings_.size(); }

  void save(const std::string& dir) const;
  static RankedIndex load(const std::string& dir);

 private:
  struct TopicMeta {
    std::string id;
    std::string slug;
    std::string display_name;
  };

  std::map<std::string, std::vector<RankEntry>> rankings_;  // topic id -> entries
  std::map<std::string, TopicMeta> topics_;                 // topic id -> meta
  std::map<std::string, std::string> id_by_slug_;
  std::map<std::string, std::string> handles_;              // user id -> username
  std::unordered_map<std::string, std::string> user_by_handle_;
  std::unordered_map<std::string, std::vector<UserTopicEntry>> by_user_;

  void finalize_user_view();
};

// Handle file: user<TAB>username.
std::map<std::string, std::string> load_handles(const std::string& path);
void save_handles(const std::map<std::string, std::string>& handles, const std::string& path);

}  // namespace topex
