#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "topex/events.hpp"
#include "topex/util.hpp"

using namespace topex;

namespace {

EventRecord message(Network net, Source src, Attribution attr, const std::string& user,
                    const std::string& text, int64_t ts = 100) {
  EventRecord e;
  e.kind = EventKind::MESSAGE;
  e.network = net;
  e.attribution = attr;
  e.subject = user;
  e.ts = ts;
  e.payload = MessagePayload{text, src};
  return e;
}

}  // namespace

TEST_CASE("valid events across every kind pass validation") {
  std::vector<EventRecord> events;
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "u1", "hi"));
  events.push_back(message(Network::FB_PAGE, Source::PAGE_TEXT, Attribution::REACTED, "u1", "hi"));
  events.push_back(message(Network::GP, Source::HASHTAG, Attribution::GENERATED, "u2", "#Tag"));

  EventRecord list;
  list.kind = EventKind::LIST;
  list.network = Network::TW;
  list.attribution = Attribution::CREDITED;
  list.subject = "u1";
  list.ts = 5;
  list.payload = ListPayload{"economists", ListRole::MEMBER};
  events.push_back(list);

  EventRecord skills;
  skills.kind = EventKind::PROFILE_FIELD;
  skills.network = Network::LI;
  skills.attribution = Attribution::GENERATED;
  skills.subject = "u3";
  skills.ts = 9;
  ProfileFieldPayload sp;
  sp.field = ProfileField::SKILLS;
  sp.text = "python statistics";
  skills.payload = sp;
  events.push_back(skills);

  EventRecord edge;
  edge.kind = EventKind::GRAPH_EDGE;
  edge.network = Network::TW;
  edge.attribution = Attribution::GRAPH;
  edge.subject = "u1";
  edge.ts = 10;
  edge.payload = GraphEdgePayload{"u2", EdgeSet::FOLLOWERS};
  events.push_back(edge);

  EventRecord doc;
  doc.kind = EventKind::SHARED_DOC;
  doc.network = Network::TW;
  doc.attribution = Attribution::GENERATED;
  doc.subject = "u1";
  doc.ts = 11;
  doc.payload = SharedDocPayload{"d1", "budget analysis", 12};
  events.push_back(doc);

  EventRecord wiki;
  wiki.kind = EventKind::WIKI_PAGE;
  wiki.network = Network::WIKI;
  wiki.attribution = Attribution::CREDITED;
  wiki.subject = "u4";
  wiki.ts = 12;
  wiki.payload = WikiPagePayload{"famous economist", 60, 20};
  events.push_back(wiki);

  for (const auto& e : events) {
    auto reason = validate_event(e);
    CAPTURE(reason.value_or(""));
    CHECK(!reason.has_value());
  }
}

TEST_CASE("validation rejects structural violations") {
  // Empty subject.
  EventRecord e = message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "", "hi");
  CHECK(validate_event(e).has_value());

  // Negative timestamp.
  e = message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "u1", "hi", -1);
  CHECK(validate_event(e).has_value());

  // Empty text.
  e = message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "u1", "");
  CHECK(validate_event(e).has_value());

  // Page text on the wrong network.
  e = message(Network::TW, Source::PAGE_TEXT, Attribution::GENERATED, "u1", "hi");
  CHECK(validate_event(e).has_value());

  // Graph attribution on a message.
  e = message(Network::TW, Source::MSG_TEXT, Attribution::GRAPH, "u1", "hi");
  CHECK(validate_event(e).has_value());

  // Member list must be credited.
  EventRecord list;
  list.kind = EventKind::LIST;
  list.network = Network::TW;
  list.attribution = Attribution::GENERATED;
  list.subject = "u1";
  list.ts = 1;
  list.payload = ListPayload{"economists", ListRole::MEMBER};
  CHECK(validate_event(list).has_value());

  // Lists exist only on the follower network.
  list.attribution = Attribution::CREDITED;
  list.network = Network::FB;
  CHECK(validate_event(list).has_value());

  // Self edge.
  EventRecord edge;
  edge.kind = EventKind::GRAPH_EDGE;
  edge.network = Network::TW;
  edge.attribution = Attribution::GRAPH;
  edge.subject = "u1";
  edge.ts = 1;
  edge.payload = GraphEdgePayload{"u1", EdgeSet::FOLLOWERS};
  CHECK(validate_event(edge).has_value());

  // Friends edges belong to FB, not TW.
  edge.payload = GraphEdgePayload{"u2", EdgeSet::FRIENDS};
  CHECK(validate_event(edge).has_value());

  // Industry needs non-negative follower counts.
  EventRecord industry;
  industry.kind = EventKind::PROFILE_FIELD;
  industry.network = Network::LI;
  industry.attribution = Attribution::GENERATED;
  industry.subject = "u1";
  industry.ts = 1;
  ProfileFieldPayload p;
  p.field = ProfileField::INDUSTRY;
  p.text = "finance";
  p.company_followers = -1;
  p.industry_followers = 10;
  industry.payload = p;
  CHECK(validate_event(industry).has_value());

  // Wiki pages carry non-negative link counts.
  EventRecord wiki;
  wiki.kind = EventKind::WIKI_PAGE;
  wiki.network = Network::WIKI;
  wiki.attribution = Attribution::CREDITED;
  wiki.subject = "u1";
  wiki.ts = 1;
  wiki.payload = WikiPagePayload{"text", -5, 2};
  CHECK(validate_event(wiki).has_value());
}

TEST_CASE("event JSON round-trips through write and parse") {
  std::vector<EventRecord> events;
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "u1",
                           "tabs\tand \"quotes\" and \xc3\xbcnicode"));
  EventRecord industry;
  industry.kind = EventKind::PROFILE_FIELD;
  industry.network = Network::LI;
  industry.attribution = Attribution::GENERATED;
  industry.subject = "u9";
  industry.ts = 77;
  ProfileFieldPayload p;
  p.field = ProfileField::INDUSTRY;
  p.text = "finance";
  p.company_followers = 1234.5;
  p.industry_followers = 99999;
  industry.payload = p;
  events.push_back(industry);

  EventRecord total;
  total.kind = EventKind::PROFILE_FIELD;
  total.network = Network::TW;
  total.attribution = Attribution::GENERATED;
  total.subject = "u9";
  total.ts = 78;
  ProfileFieldPayload tp;
  tp.field = ProfileField::LIST_TOTAL;
  tp.count = 10;
  total.payload = tp;
  events.push_back(total);

  for (const auto& e : events) {
    EventRecord back = parse_event(write_event(e));
    CHECK(back.kind == e.kind);
    CHECK(back.network == e.network);
    CHECK(back.attribution == e.attribution);
    CHECK(back.subject == e.subject);
    CHECK(back.ts == e.ts);
    CHECK(write_event(back) == write_event(e));
  }
}

TEST_CASE("read_events collects rejects without failing") {
  std::string dir = (std::filesystem::temp_directory_path() / "topex_events_test").string();
  std::filesystem::remove_all(dir);
  std::string good = write_event(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED,
                                         "u1", "hello"));
  std::string bad_json = "{not json";
  std::string bad_semantics = write_event(message(Network::TW, Source::PAGE_TEXT,
                                                  Attribution::GENERATED, "u1", "hello"));
  write_file(dir + "/events.jsonl", good + "\n" + bad_json + "\n" + bad_semantics + "\n" + good + "\n");

  ReadResult result = read_events(dir + "/events.jsonl");
  CHECK(result.total_lines == 4);
  CHECK(result.events.size() == 2);
  REQUIRE(result.rejects.size() == 2);
  CHECK(result.rejects[0].line_no == 2);
  CHECK(result.rejects[1].line_no == 3);

  CHECK_THROWS(read_valid_events(dir + "/events.jsonl"));

  write_events(result.events, dir + "/valid.jsonl");
  CHECK(read_valid_events(dir + "/valid.jsonl").size() == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("collect_users includes graph actors") {
  std::vector<EventRecord> events;
  events.push_back(message(Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "carol", "hi"));
  EventRecord edge;
  edge.kind = EventKind::GRAPH_EDGE;
  edge.network = Network::TW;
  edge.attribution = Attribution::GRAPH;
  edge.subject = "alice";
  edge.ts = 1;
  edge.payload = GraphEdgePayload{"bob", EdgeSet::FOLLOWERS};
  events.push_back(edge);

  auto users = collect_users(events);
  CHECK(users == std::vector<std::string>{"alice", "bob", "carol"});
}
