#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "topex/catalog.hpp"
#include "topex/connectivity.hpp"
#include "topex/extract.hpp"
#include "topex/ontology.hpp"

using namespace topex;

namespace {

struct Fixture {
  TopicOntology ont;
  PhraseDictionary dict;

  Fixture() {
    ont.add({"s1", "root", "Root", TopicLevel::SUPER, ""});
    ont.add({"t1", "economics", "Economics", TopicLevel::SUB, "s1"});
    ont.add({"t2", "biology", "Biology", TopicLevel::SUB, "s1"});
    ont.validate();
    dict.add("economy", "t1", 1.0);
    dict.add("inflation", "t1", 1.0);
    dict.add("genome", "t2", 1.0);
    dict.validate(ont);
  }
};

EventRecord message(Network net, Source src, Attribution attr, const std::string& user,
                    const std::string& text, int64_t ts = 1000) {
  EventRecord e;
  e.kind = EventKind::MESSAGE;
  e.network = net;
  e.attribution = attr;
  e.subject = user;
  e.ts = ts;
  e.payload = MessagePayload{text, src};
  return e;
}

EventRecord list_event(const std::string& user, const std::string& name, ListRole role,
                       int64_t ts = 1000) {
  EventRecord e;
  e.kind = EventKind::LIST;
  e.network = Network::TW;
  e.attribution = role == ListRole::MEMBER ? Attribution::CREDITED : Attribution::GENERATED;
  e.subject = user;
  e.ts = ts;
  e.payload = ListPayload{name, role};
  return e;
}

EventRecord edge_event(const std::string& user, const std::string& actor, EdgeSet set,
                       int64_t ts = 1000) {
  EventRecord e;
  e.kind = EventKind::GRAPH_EDGE;
  e.network = set == EdgeSet::FRIENDS ? Network::FB : Network::TW;
  e.attribution = Attribution::GRAPH;
  e.subject = user;
  e.ts = ts;
  e.payload = GraphEdgePayload{actor, set};
  return e;
}

}  // namespace

TEST_CASE("connectivity is the euclidean norm of the in-degree vector") {
  ConnectivityVector v{{"tw_followers", 3.0}, {"fb_friends", 4.0}};
  CHECK(connectivity(v) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(connectivity(ConnectivityVector{}) == 0.0);
  ConnectivityVector single{{"tw_followers", 7.5}};
  CHECK(connectivity(single) == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("list estimate scales collected topic lists by the profile total") {
  ListStats stats;
  stats.collected_total = 4;
  stats.list_total = 10;
  stats.has_list_total = true;
  stats.collected_by_topic["t1"] = 2;
  CHECK(estimate_list_feature(stats, "t1") == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(estimate_list_feature(stats, "t2") == 0.0);

  // Without a profile total the collected count stands in: estimate = L_c(u,t).
  stats.has_list_total = false;
  CHECK(estimate_list_feature(stats, "t1") == doctest::Approx(2.0).epsilon(1e-12));

  ListStats empty;
  CHECK(estimate_list_feature(empty, "t1") == 0.0);
}

TEST_CASE("shared-document feature sums tf times reactions") {
  Fixture fx;
  PhraseDictionary dict;
  dict.add("economy", "t1", 0.5);
  std::vector<SharedDocPayload> docs;
  docs.push_back({"d1", "economy", 10});
  BagOfTopics one = socialwww_feature(docs, dict);
  CHECK(one["t1"] == doctest::Approx(5.0).epsilon(1e-12));

  PhraseDictionary dict2;
  dict2.add("economy", "t1", 0.5);
  dict2.add("markets", "t1", 0.2);
  std::vector<SharedDocPayload> two;
  two.push_back({"d1", "economy", 10});
  two.push_back({"d2", "markets", 5});
  BagOfTopics bag = socialwww_feature(two, dict2);
  CHECK(bag["t1"] == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("wiki feature is tf times inlinks over outlinks, denominator clamped") {
  PhraseDictionary dict;
  dict.add("economy", "t1", 0.3);
  WikiPagePayload page{"economy", 60, 20};
  CHECK(wiki_feature(page, dict)["t1"] == doctest::Approx(0.9).epsilon(1e-12));

  WikiPagePayload orphan{"economy", 5, 0};
  CHECK(wiki_feature(orphan, dict)["t1"] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("message events land in their catalog slot with phrase weights") {
  Fixture fx;
  std::vector<EventRecord> events;
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "u1",
                           "the economy and inflation"));
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "u1",
                           "genome sequencing"));
  events.push_back(message(Network::FB, Source::MSG_TEXT, Attribution::REACTED, "u1",
                           "inflation inflation"));
  events.push_back(message(Network::GP, Source::HASHTAG, Attribution::GENERATED, "u1",
                           "#Economy"));

  FeatureStore store = extract_features(events, fx.ont, fx.dict, ExtractOptions{});
  const FeatureRow* row = store.row("u1", "t1");
  REQUIRE(row != nullptr);
  CHECK((*row)[catalog_index("TW_MSG_TEXT_GENERATED")] == 2.0);
  CHECK((*row)[catalog_index("FB_MSG_TEXT_REACTED")] == 2.0);
  CHECK((*row)[catalog_index("GP_HASHTAG_GENERATED")] == 1.0);
  const FeatureRow* bio = store.row("u1", "t2");
  REQUIRE(bio != nullptr);
  CHECK((*bio)[catalog_index("TW_MSG_TEXT_GENERATED")] == 1.0);
}

TEST_CASE("hashtag text is camel-split before topicization") {
  Fixture fx;
  PhraseDictionary dict;
  dict.add("machine learning", "t1", 1.0);
  std::vector<EventRecord> events;
  events.push_back(message(Network::TW, Source::HASHTAG, Attribution::GENERATED, "u1",
                           "#MachineLearning"));
  FeatureStore store = extract_features(events, fx.ont, dict, ExtractOptions{});
  const FeatureRow* row = store.row("u1", "t1");
  REQUIRE(row != nullptr);
  CHECK((*row)[catalog_index("TW_HASHTAG_GENERATED")] == 1.0);
}

TEST_CASE("window keeps events inside inclusive bounds only") {
  Fixture fx;
  ExtractOptions options;
  options.as_of = 1000000;
  options.window_days = 1;  // [1000000 - 86400, 1000000]
  std::vector<EventRecord> events;
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "early",
                           "economy", options.as_of - 86401));
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "left",
                           "economy", options.as_of - 86400));
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "right",
                           "economy", options.as_of));
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "late",
                           "economy", options.as_of + 1));

  ExtractStats stats;
  FeatureStore store = extract_features(events, fx.ont, fx.dict, options, &stats);
  CHECK(stats.events_total == 4);
  CHECK(stats.events_in_window == 2);
  CHECK(store.row("early", "t1") == nullptr);
  CHECK(store.row("left", "t1") != nullptr);
  CHECK(store.row("right", "t1") != nullptr);
  CHECK(store.row("late", "t1") == nullptr);
}

TEST_CASE("as_of zero anchors the window at the latest event") {
  Fixture fx;
  ExtractOptions options;
  options.window_days = 1;
  std::vector<EventRecord> events;
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "old",
                           "economy", 100));
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "new",
                           "economy", 500000));
  FeatureStore store = extract_features(events, fx.ont, fx.dict, options);
  CHECK(store.row("old", "t1") == nullptr);
  CHECK(store.row("new", "t1") != nullptr);
}

TEST_CASE("list features: membership estimate and curation counts") {
  Fixture fx;
  std::vector<EventRecord> events;
  // Four member lists collected, two about economics; profile total says 10.
  events.push_back(list_event("u1", "economy watchers", ListRole::MEMBER));
  events.push_back(list_event("u1", "inflation hawks", ListRole::MEMBER));
  events.push_back(list_event("u1", "genome nerds", ListRole::MEMBER));
  events.push_back(list_event("u1", "random stuff", ListRole::MEMBER));
  EventRecord total;
  total.kind = EventKind::PROFILE_FIELD;
  total.network = Network::TW;
  total.attribution = Attribution::GENERATED;
  total.subject = "u1";
  total.ts = 1000;
  ProfileFieldPayload tp;
  tp.field = ProfileField::LIST_TOTAL;
  tp.count = 10;
  total.payload = tp;
  events.push_back(total);
  // Curated lists count into the generated slot per matched topic.
  events.push_back(list_event("u1", "economy pros", ListRole::CREATOR));
  events.push_back(list_event("u1", "economy fans", ListRole::SUBSCRIBER));

  FeatureStore store = extract_features(events, fx.ont, fx.dict, ExtractOptions{});
  const FeatureRow* row = store.row("u1", "t1");
  REQUIRE(row != nullptr);
  // L_c(u,t1)=2, L_c(u)=4, L(u)=10 -> 5.
  CHECK((*row)[catalog_index("TW_LIST_CREDITED")] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK((*row)[catalog_index("TW_LIST_GENERATED")] == 2.0);
  const FeatureRow* bio = store.row("u1", "t2");
  REQUIRE(bio != nullptr);
  CHECK((*bio)[catalog_index("TW_LIST_CREDITED")] == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("profile features: skills, industry ratio, degenerate industry") {
  Fixture fx;
  std::vector<EventRecord> events;

  EventRecord skills;
  skills.kind = EventKind::PROFILE_FIELD;
  skills.network = Network::LI;
  skills.attribution = Attribution::GENERATED;
  skills.subject = "u1";
  skills.ts = 1000;
  ProfileFieldPayload sp;
  sp.field = ProfileField::SKILLS;
  sp.text = "economy genome";
  skills.payload = sp;
  events.push_back(skills);

  EventRecord industry;
  industry.kind = EventKind::PROFILE_FIELD;
  industry.network = Network::LI;
  industry.attribution = Attribution::GENERATED;
  industry.subject = "u1";
  industry.ts = 1000;
  ProfileFieldPayload ip;
  ip.field = ProfileField::INDUSTRY;
  ip.text = "economy";
  ip.company_followers = 500;
  ip.industry_followers = 2000;
  industry.payload = ip;
  events.push_back(industry);

  EventRecord degenerate = industry;
  ProfileFieldPayload dp = ip;
  dp.industry_followers = 0;
  degenerate.payload = dp;
  events.push_back(degenerate);

  ExtractStats stats;
  FeatureStore store = extract_features(events, fx.ont, fx.dict, ExtractOptions{}, &stats);
  const FeatureRow* row = store.row("u1", "t1");
  REQUIRE(row != nullptr);
  CHECK((*row)[catalog_index("LI_SKILLS_GENERATED")] == 1.0);
  CHECK((*row)[catalog_index("LI_INDUSTRY_GENERATED")] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(stats.degenerate_industry == 1);
  const FeatureRow* bio = store.row("u1", "t2");
  REQUIRE(bio != nullptr);
  CHECK((*bio)[catalog_index("LI_SKILLS_GENERATED")] == 1.0);
}

TEST_CASE("graph features divide neighbor strength by the global topic total") {
  Fixture fx;
  std::vector<EventRecord> events;
  // v1 and v2 generate economics text; their strengths flow to u1's slots.
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "v1",
                           "economy inflation"));  // strength 2
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "v2",
                           "economy"));  // strength 1
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "u1",
                           "economy"));  // strength 1, total = 4
  events.push_back(edge_event("u1", "v1", EdgeSet::FOLLOWERS));
  events.push_back(edge_event("u1", "v2", EdgeSet::FOLLOWERS));
  // Duplicate edge must not double the contribution.
  events.push_back(edge_event("u1", "v1", EdgeSet::FOLLOWERS));
  events.push_back(edge_event("u1", "v2", EdgeSet::FRIENDS));

  FeatureStore store = extract_features(events, fx.ont, fx.dict, ExtractOptions{});
  const FeatureRow* row = store.row("u1", "t1");
  REQUIRE(row != nullptr);
  CHECK((*row)[catalog_index("TW_FOLLOWERS_GRAPH")] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK((*row)[catalog_index("FB_FRIENDS_GRAPH")] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("extraction is invariant under event permutation") {
  Fixture fx;
  std::mt19937_64 gen(4242);
  std::vector<EventRecord> events;
  const char* texts[] = {"economy", "inflation talk", "genome", "economy inflation",
                         "nothing here"};
  for (int i = 0; i < 500; ++i) {
    std::string user = "u" + std::to_string(gen() % 17);
    int pick = static_cast<int>(gen() % 5);
    int src = static_cast<int>(gen() % 3);
    Source source = src == 0 ? Source::MSG_TEXT : (src == 1 ? Source::URL : Source::URL_META);
    Attribution attr = gen() % 2 ? Attribution::GENERATED : Attribution::REACTED;
    events.push_back(message(Network::TW, source, attr, user, texts[pick],
                             1000 + static_cast<int64_t>(gen() % 1000)));
  }
  for (int i = 0; i < 60; ++i) {
    std::string a = "u" + std::to_string(gen() % 17);
    std::string b = "u" + std::to_string(gen() % 17);
    if (a == b) continue;
    events.push_back(edge_event(a, b, EdgeSet::FOLLOWERS, 1500));
  }

  FeatureStore base = extract_features(events, fx.ont, fx.dict, ExtractOptions{});
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(events.begin(), events.end(), gen);
    FeatureStore shuffled = extract_features(events, fx.ont, fx.dict, ExtractOptions{});
    REQUIRE(shuffled.row_count() == base.row_count());
    for (const auto& [user, topic] : base.sorted_keys()) {
      const FeatureRow* a = base.row(user, topic);
      const FeatureRow* b = shuffled.row(user, topic);
      REQUIRE(b != nullptr);
      for (size_t k = 0; k < kCatalogSize; ++k) {
        CHECK((*a)[k] == (*b)[k]);  // bit identical, not approximately equal
      }
    }
  }
}

TEST_CASE("parallel extraction matches the serial reference bit for bit") {
  Fixture fx;
  std::mt19937_64 gen(777);
  std::vector<EventRecord> events;
  for (int i = 0; i < 2000; ++i) {
    std::string user = "u" + std::to_string(gen() % 40);
    const char* text = gen() % 2 ? "economy inflation economy" : "genome";
    events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, user, text,
                             1000 + static_cast<int64_t>(gen() % 5000)));
  }
  ExtractStats par_stats;
  ExtractStats ref_stats;
  FeatureStore par = extract_features(events, fx.ont, fx.dict, ExtractOptions{}, &par_stats);
  FeatureStore ref = ref::extract_features(events, fx.ont, fx.dict, ExtractOptions{}, &ref_stats);
  REQUIRE(par.row_count() == ref.row_count());
  for (const auto& [user, topic] : ref.sorted_keys()) {
    const FeatureRow* a = ref.row(user, topic);
    const FeatureRow* b = par.row(user, topic);
    REQUIRE(b != nullptr);
    for (size_t k = 0; k < kCatalogSize; ++k) CHECK((*a)[k] == (*b)[k]);
  }
  CHECK(par_stats.contributions == ref_stats.contributions);
  CHECK(par_stats.events_in_window == ref_stats.events_in_window);
}

TEST_CASE("events with no catalog slot are counted, not crashed on") {
  Fixture fx;
  std::vector<EventRecord> events;
  // FB list events are rejected at validation; build a URL credited message
  // instead: TW URL has no CREDITED slot in the catalog.
  events.push_back(message(Network::TW, Source::URL, Attribution::CREDITED, "u1", "economy"));
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "u1", "economy"));
  ExtractStats stats;
  FeatureStore store = extract_features(events, fx.ont, fx.dict, ExtractOptions{}, &stats);
  CHECK(stats.skipped_missing_slot == 1);
  const FeatureRow* row = store.row("u1", "t1");
  REQUIRE(row != nullptr);
  CHECK((*row)[catalog_index("TW_MSG_TEXT_GENERATED")] == 1.0);
}
