#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "topex/events.hpp"
#include "topex/feature_store.hpp"
#include "topex/ontology.hpp"

namespace topex {

struct ExtractOptions {
  int64_t as_of = 0;      // 0 -> max event timestamp
  int window_days = 90;   // window is [as_of - days*86400, as_of], inclusive
};

struct ExtractStats {
  int64_t events_total = 0;
  int64_t events_in_window = 0;
  int64_t skipped_missing_slot = 0;  // well-formed events with no catalog slot
  int64_t degenerate_industry = 0;   // INDUSTRY fields with zero industry followers
  int64_t contributions = 0;
  int64_t store_rows = 0;
  int64_t store_users = 0;
};

void save_extract_stats(const ExtractStats& stats, const std::string& path);

// Twitter list counts backing the collected-list estimate.
struct ListStats {
  int64_t collected_total = 0;  // labeled lists collected for the user
  int64_t list_total = 0;       // true list count from the user's profile
  bool has_list_total = false;  // when absent, collected_total stands in
  std::map<std::string, int64_t> collected_by_topic;
};

// L_c(u,t) * L(u) / L_c(u); 0 when no lists were collected.
double estimate_list_feature(const ListStats& stats, const std::string& topic);

// Per topic: sum over docs of (topic frequency in the doc's bag) * reactions.
BagOfTopics socialwww_feature(const std::vector<SharedDocPayload>& docs,
                              const PhraseDictionary& dict);

// Per topic: (topic frequency in the page's bag) * inlinks / max(outlinks, 1).
BagOfTopics wiki_feature(const WikiPagePayload& page, const PhraseDictionary& dict);

// Full extraction over validated events: text, lists, profile, shared docs,
// wiki pages, then graph aggregation over the reduced text strengths. Output
// is invariant under any permutation or partitioning of the input events.
FeatureStore extract_features(const std::vector<EventRecord>& events, const TopicOntology& ont,
                              const PhraseDictionary& dict, const ExtractOptions& options,
                              ExtractStats* stats = nullptr);

namespace ref {
// Serial reference; must produce a bit-identical store.
FeatureStore extract_features(const std::vector<EventRecord>& events, const TopicOntology& ont,
                              const PhraseDictionary& dict, const ExtractOptions& options,
                              ExtractStats* stats = nullptr);
}  // namespace ref

}  // namespace topex
