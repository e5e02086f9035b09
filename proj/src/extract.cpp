#include "topex/extract.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "topex/util.hpp"

namespace topex {

namespace {

struct Contribution {
  std::string user;
  std::string topic;
  int slot;
  double value;

  bool operator<(const Contribution& o) const {
    return std::tie(user, topic, slot, value) < std::tie(o.user, o.topic, o.slot, o.value);
  }
};

// Slots whose values define a user's own topic strength for graph
// aggregation: authored text only, never graph-derived values.
const std::vector<int>& generated_text_slots() {
  static const std::vector<int> slots = [] {
    std::vector<int> s;
    for (size_t k = 0; k < kCatalogSize; ++k) {
      const CatalogEntry& e = catalog()[k];
      bool text = e.source == Source::MSG_TEXT || e.source == Source::PAGE_TEXT ||
                  e.source == Source::HASHTAG;
      if (text && e.attribution == Attribution::GENERATED) s.push_back(static_cast<int>(k));
    }
    return s;
  }();
  return slots;
}

int64_t window_start(int64_t as_of, int window_days) {
  return as_of - static_cast<int64_t>(window_days) * 86400;
}

Source edge_source(EdgeSet e) {
  switch (e) {
    case EdgeSet::FOLLOWERS: return Source::FOLLOWERS;
    case EdgeSet::FOLLOWING: return Source::FOLLOWING;
    case EdgeSet::FRIENDS: return Source::FRIENDS;
  }
  return Source::FOLLOWERS;
}

// Per-event contributions for the independently extractable kinds. LIST and
// GRAPH_EDGE need cross-event aggregation and are handled separately.
void map_event(const EventRecord& ev, const PhraseDictionary& dict,
               std::vector<Contribution>& out, ExtractStats& stats) {
  switch (ev.kind) {
    case EventKind::MESSAGE: {
      const auto& m = std::get<MessagePayload>(ev.payload);
      int slot = catalog_index(ev.network, m.source, ev.attribution);
      if (slot < 0) {
        ++stats.skipped_missing_slot;
        return;
      }
      BagOfTopics bag = m.source == Source::HASHTAG ? topicize(split_camel_case(m.text), dict)
                                                    : topicize(m.text, dict);
      for (const auto& [topic, weight] : bag) {
        if (weight > 0) out.push_back({ev.subject, topic, slot, weight});
      }
      return;
    }
    case EventKind::SHARED_DOC: {
      const auto& d = std::get<SharedDocPayload>(ev.payload);
      int slot = catalog_index(Network::TW, Source::SOCIAL_WWW, Attribution::GENERATED);
      for (const auto& [topic, tf] : topicize(d.text, dict)) {
        double v = tf * static_cast<double>(d.reactions);
        if (v > 0) out.push_back({ev.subject, topic, slot, v});
      }
      return;
    }
    case EventKind::WIKI_PAGE: {
      const auto& w = std::get<WikiPagePayload>(ev.payload);
      int slot = catalog_index(Network::WIKI, Source::WIKI_INOUT, Attribution::CREDITED);
      for (const auto& [topic, v] : wiki_feature(w, dict)) {
        if (v > 0) out.push_back({ev.subject, topic, slot, v});
      }
      return;
    }
    case EventKind::PROFILE_FIELD: {
      const auto& f = std::get<ProfileFieldPayload>(ev.payload);
      if (f.field == ProfileField::SKILLS) {
        int slot = catalog_index(Network::LI, Source::SKILLS, Attribution::GENERATED);
        for (const auto& [topic, weight] : topicize(f.text, dict)) {
          if (weight > 0) out.push_back({ev.subject, topic, slot, 1.0});
        }
      } else if (f.field == ProfileField::INDUSTRY) {
        if (f.industry_followers <= 0) {
          ++stats.degenerate_industry;
          return;
        }
        int slot = catalog_index(Network::LI, Source::INDUSTRY, Attribution::GENERATED);
        double ratio = f.company_followers / f.industry_followers;
        for (const auto& [topic, weight] : topicize(f.text, dict)) {
          if (weight > 0 && ratio > 0) out.push_back({ev.subject, topic, slot, ratio});
        }
      }
      // LIST_TOTAL feeds the list estimate, no direct contribution.
      return;
    }
    case EventKind::LIST:
    case EventKind::GRAPH_EDGE:
      return;
  }
}

// Sorting before reduction makes the sums independent of how the
// contributions were produced or partitioned upstream.
void reduce_contributions(std::vector<Contribution>& contributions, FeatureStore& store) {
  std::sort(contributions.begin(), contributions.end());
  size_t i = 0;
  while (i < contributions.size()) {
    size_t j = i;
    double sum = 0.0;
    while (j < contributions.size() && contributions[j].user == contributions[i].user &&
           contributions[j].topic == contributions[i].topic &&
           contributions[j].slot == contributions[i].slot) {
      sum += contributions[j].value;
      ++j;
    }
    store.add(contributions[i].user, contributions[i].topic, contributions[i].slot, sum);
    i = j;
  }
}

void extract_lists(const std::vector<const EventRecord*>& events, const PhraseDictionary& dict,
                   std::vector<Contribution>& out) {
  std::map<std::string, ListStats> per_user;
  int list_credited = catalog_index(Network::TW, Source::LIST, Attribution::CREDITED);
  int list_generated = catalog_index(Network::TW, Source::LIST, Attribution::GENERATED);

  for (const EventRecord* ev : events) {
    if (ev->kind == EventKind::PROFILE_FIELD) {
      const auto& f = std::get<ProfileFieldPayload>(ev->payload);
      if (f.field == ProfileField::LIST_TOTAL) {
        ListStats& s = per_user[ev->subject];
        s.has_list_total = true;
        s.list_total = std::max(s.list_total, f.count);
      }
      continue;
    }
    if (ev->kind != EventKind::LIST) continue;
    const auto& l = std::get<ListPayload>(ev->payload);
    BagOfTopics bag = topicize(l.list_name, dict);
    if (l.role == ListRole::MEMBER) {
      ListStats& s = per_user[ev->subject];
      ++s.collected_total;
      for (const auto& [topic, weight] : bag) {
        if (weight > 0) ++s.collected_by_topic[topic];
      }
    } else {
      // Lists the user creates or subscribes to speak for the user directly.
      for (const auto& [topic, weight] : bag) {
        if (weight > 0) out.push_back({ev->subject, topic, list_generated, 1.0});
      }
    }
  }

  for (const auto& [user, stats] : per_user) {
    for (const auto& [topic, count] : stats.collected_by_topic) {
      double v = estimate_list_feature(stats, topic);
      if (v > 0) out.push_back({user, topic, list_credited, v});
    }
  }
}

void extract_graph(const std::vector<const EventRecord*>& events, const FeatureStore& store,
                   std::vector<Contribution>& out) {
  // Base strength: each user's own authored-text features, per topic.
  std::map<std::string, std::map<std::string, double>> strength;  // topic -> user -> s
  for (const auto& [user, topic] : store.sorted_keys()) {
    const FeatureRow& row = *store.row(user, topic);
    double s = 0.0;
    for (int slot : generated_text_slots()) s += row[slot];
    if (s > 0) strength[topic][user] = s;
  }
  std::map<std::string, double> global_total;
  for (const auto& [topic, users] : strength) {
    std::vector<double> values;
    values.reserve(users.size());
    for (const auto& [user, s] : users) values.push_back(s);
    global_total[topic] = deterministic_sum(values);
  }

  // Distinct edges only; repeated observations of the same edge are one edge.
  std::set<std::tuple<std::string, int, std::string>> edges;  // (subject, slot, actor)
  for (const EventRecord* ev : events) {
    if (ev->kind != EventKind::GRAPH_EDGE) continue;
    const auto& g = std::get<GraphEdgePayload>(ev->payload);
    int slot = catalog_index(ev->network, edge_source(g.edge_set), Attribution::GRAPH);
    if (slot < 0) continue;
    edges.insert({ev->subject, slot, g.actor});
  }

  // Group neighbors per (subject, slot); set iteration is already grouped.
  auto it = edges.begin();
  while (it != edges.end()) {
    const std::string& subject = std::get<0>(*it);
    int slot = std::get<1>(*it);
    std::vector<const std::string*> neighbors;
    while (it != edges.end() && std::get<0>(*it) == subject && std::get<1>(*it) == slot) {
      neighbors.push_back(&std::get<2>(*it));
      ++it;
    }
    // Per topic, sum neighbor strengths and scale by the global total.
    std::map<std::string, std::vector<double>> sums;
    for (const std::string* v : neighbors) {
      for (const auto& [topic, users] : strength) {
        auto uit = users.find(*v);
        if (uit != users.end()) sums[topic].push_back(uit->second);
      }
    }
    for (auto& [topic, values] : sums) {
      double total = global_total[topic];
      if (total <= 0) continue;
      double v = deterministic_sum(values) / total;
      if (v > 0) out.push_back({subject, topic, slot, v});
    }
  }
}

FeatureStore extract_common(const std::vector<EventRecord>& events, const TopicOntology& ont,
                            const PhraseDictionary& dict, const ExtractOptions& options,
                            ExtractStats* stats_out, bool parallel) {
  dict.validate(ont);
  ExtractStats stats;
  stats.events_total = static_cast<int64_t>(events.size());

  int64_t as_of = options.as_of;
  if (as_of == 0) {
    for (const auto& ev : events) as_of = std::max(as_of, ev.ts);
  }
  int64_t start = window_start(as_of, options.window_days);
  std::vector<const EventRecord*> windowed;
  windowed.reserve(events.size());
  for (const auto& ev : events) {
    if (ev.ts >= start && ev.ts <= as_of) windowed.push_back(&ev);
  }
  stats.events_in_window = static_cast<int64_t>(windowed.size());

  std::vector<Contribution> contributions;
  if (parallel) {
#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    std::vector<std::vector<Contribution>> parts(threads);
    std::vector<ExtractStats> part_stats(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (size_t i = 0; i < windowed.size(); ++i) {
#ifdef _OPENMP
      int tid = omp_get_thread_num();
#else
      int tid = 0;
#endif
      map_event(*windowed[i], dict, parts[tid], part_stats[tid]);
    }
    size_t total = 0;
    for (const auto& p : parts) total += p.size();
    contributions.reserve(total);
    for (int t = 0; t < threads; ++t) {
      contributions.insert(contributions.end(), parts[t].begin(), parts[t].end());
      stats.skipped_missing_slot += part_stats[t].skipped_missing_slot;
      stats.degenerate_industry += part_stats[t].degenerate_industry;
    }
  } else {
    for (const EventRecord* ev : windowed) map_event(*ev, dict, contributions, stats);
  }

  extract_lists(windowed, dict, contributions);

  FeatureStore store;
  stats.contributions = static_cast<int64_t>(contributions.size());
  reduce_contributions(contributions, store);

  std::vector<Contribution> graph_contributions;
  extract_graph(windowed, store, graph_contributions);
  stats.contributions += static_cast<int64_t>(graph_contributions.size());
  reduce_contributions(graph_contributions, store);

  stats.store_rows = static_cast<int64_t>(store.row_count());
  stats.store_users = static_cast<int64_t>(store.users().size());
  if (stats_out) *stats_out = stats;
  return store;
}

}  // namespace

double estimate_list_feature(const ListStats& stats, const std::string& topic) {
  if (stats.collected_total <= 0) return 0.0;
  auto it = stats.collected_by_topic.find(topic);
  if (it == stats.collected_by_topic.end()) return 0.0;
  double l_u = stats.has_list_total ? static_cast<double>(stats.list_total)
                                    : static_cast<double>(stats.collected_total);
  return static_cast<double>(it->second) * l_u / static_cast<double>(stats.collected_total);
}

BagOfTopics socialwww_feature(const std::vector<SharedDocPayload>& docs,
                              const PhraseDictionary& dict) {
  std::map<std::string, std::vector<double>> terms;
  for (const auto& doc : docs) {
    for (const auto& [topic, tf] : topicize(doc.text, dict)) {
      double v = tf * static_cast<double>(doc.reactions);
      if (v > 0) terms[topic].push_back(v);
    }
  }
  BagOfTopics out;
  for (auto& [topic, values] : terms) out[topic] = deterministic_sum(values);
  return out;
}

BagOfTopics wiki_feature(const WikiPagePayload& page, const PhraseDictionary& dict) {
  double ratio = static_cast<double>(page.inlinks) /
                 static_cast<double>(std::max<int64_t>(page.outlinks, 1));
  BagOfTopics out;
  for (const auto& [topic, tf] : topicize(page.text, dict)) {
    double v = tf * ratio;
    if (v > 0) out[topic] = v;
  }
  return out;
}

void save_extract_stats(const ExtractStats& stats, const std::string& path) {
  std::ostringstream out;
  out << "# extract_stats\n";
  out << "contributions\t" << stats.contributions << "\n";
  out << "degenerate_industry\t" << stats.degenerate_industry << "\n";
  out << "events_in_window\t" << stats.events_in_window << "\n";
  out << "events_total\t" << stats.events_total << "\n";
  out << "skipped_missing_slot\t" << stats.skipped_missing_slot << "\n";
  out << "store_rows\t" << stats.store_rows << "\n";
  out << "store_users\t" << stats.store_users << "\n";
  write_file(path, out.str());
}

FeatureStore extract_features(const std::vector<EventRecord>& events, const TopicOntology& ont,
                              const PhraseDictionary& dict, const ExtractOptions& options,
                              ExtractStats* stats) {
  return extract_common(events, ont, dict, options, stats, true);
}

namespace ref {
FeatureStore extract_features(const std::vector<EventRecord>& events, const TopicOntology& ont,
                              const PhraseDictionary& dict, const ExtractOptions& options,
                              ExtractStats* stats) {
  return extract_common(events, ont, dict, options, stats, false);
}
}  // namespace ref

}  // namespace topex
