#include "topex/events.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "topex/util.hpp"

namespace topex {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::MESSAGE: return "MESSAGE";
    case EventKind::LIST: return "LIST";
    case EventKind::PROFILE_FIELD: return "PROFILE_FIELD";
    case EventKind::GRAPH_EDGE: return "GRAPH_EDGE";
    case EventKind::SHARED_DOC: return "SHARED_DOC";
    case EventKind::WIKI_PAGE: return "WIKI_PAGE";
  }
  return "?";
}

std::string_view to_string(ListRole r) {
  switch (r) {
    case ListRole::MEMBER: return "MEMBER";
    case ListRole::CREATOR: return "CREATOR";
    case ListRole::SUBSCRIBER: return "SUBSCRIBER";
  }
  return "?";
}

std::string_view to_string(ProfileField f) {
  switch (f) {
    case ProfileField::SKILLS: return "SKILLS";
    case ProfileField::INDUSTRY: return "INDUSTRY";
    case ProfileField::LIST_TOTAL: return "LIST_TOTAL";
  }
  return "?";
}

std::string_view to_string(EdgeSet e) {
  switch (e) {
    case EdgeSet::FOLLOWERS: return "FOLLOWERS";
    case EdgeSet::FOLLOWING: return "FOLLOWING";
    case EdgeSet::FRIENDS: return "FRIENDS";
  }
  return "?";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  if (s == "MESSAGE") return EventKind::MESSAGE;
  if (s == "LIST") return EventKind::LIST;
  if (s == "PROFILE_FIELD") return EventKind::PROFILE_FIELD;
  if (s == "GRAPH_EDGE") return EventKind::GRAPH_EDGE;
  if (s == "SHARED_DOC") return EventKind::SHARED_DOC;
  if (s == "WIKI_PAGE") return EventKind::WIKI_PAGE;
  return std::nullopt;
}

std::optional<ListRole> list_role_from_string(std::string_view s) {
  if (s == "MEMBER") return ListRole::MEMBER;
  if (s == "CREATOR") return ListRole::CREATOR;
  if (s == "SUBSCRIBER") return ListRole::SUBSCRIBER;
  return std::nullopt;
}

std::optional<ProfileField> profile_field_from_string(std::string_view s) {
  if (s == "SKILLS") return ProfileField::SKILLS;
  if (s == "INDUSTRY") return ProfileField::INDUSTRY;
  if (s == "LIST_TOTAL") return ProfileField::LIST_TOTAL;
  return std::nullopt;
}

std::optional<EdgeSet> edge_set_from_string(std::string_view s) {
  if (s == "FOLLOWERS") return EdgeSet::FOLLOWERS;
  if (s == "FOLLOWING") return EdgeSet::FOLLOWING;
  if (s == "FRIENDS") return EdgeSet::FRIENDS;
  return std::nullopt;
}

std::optional<std::string> validate_event(const EventRecord& ev) {
  if (ev.subject.empty()) return "empty subject";
  if (ev.ts < 0) return "negative timestamp";

  switch (ev.kind) {
    case EventKind::MESSAGE: {
      const auto* p = std::get_if<MessagePayload>(&ev.payload);
      if (!p) return "MESSAGE event without message payload";
      if (p->text.empty()) return "MESSAGE with empty text";
      if (ev.attribution == Attribution::GRAPH) return "MESSAGE cannot carry GRAPH attribution";
      bool text_net = ev.network == Network::TW || ev.network == Network::FB || ev.network == Network::GP;
      bool text_src = p->source == Source::MSG_TEXT || p->source == Source::HASHTAG ||
                      p->source == Source::URL || p->source == Source::URL_META;
      if (ev.network == Network::FB_PAGE) {
        if (p->source != Source::PAGE_TEXT) return "FB_PAGE message must use PAGE_TEXT source";
      } else if (!text_net || !text_src) {
        return "MESSAGE source " + std::string(to_string(p->source)) + " not valid on network " +
               std::string(to_string(ev.network));
      }
      return std::nullopt;
    }
    case EventKind::LIST: {
      const auto* p = std::get_if<ListPayload>(&ev.payload);
      if (!p) return "LIST event without list payload";
      if (ev.network != Network::TW) return "LIST events exist only on TW";
      if (p->list_name.empty()) return "LIST with empty list_name";
      Attribution want = p->role == ListRole::MEMBER ? Attribution::CREDITED : Attribution::GENERATED;
      if (ev.attribution != want) {
        return "LIST role " + std::string(to_string(p->role)) + " requires attribution " +
               std::string(to_string(want));
      }
      return std::nullopt;
    }
    case EventKind::PROFILE_FIELD: {
      const auto* p = std::get_if<ProfileFieldPayload>(&ev.payload);
      if (!p) return "PROFILE_FIELD event without profile payload";
      if (ev.attribution != Attribution::GENERATED) return "PROFILE_FIELD must be GENERATED";
      if (p->field == ProfileField::LIST_TOTAL) {
        if (ev.network != Network::TW) return "LIST_TOTAL profile field exists only on TW";
        if (p->count < 0) return "LIST_TOTAL with negative count";
        return std::nullopt;
      }
      if (ev.network != Network::LI) return "SKILLS/INDUSTRY profile fields exist only on LI";
      if (p->text.empty()) return "PROFILE_FIELD with empty text";
      if (p->field == ProfileField::INDUSTRY) {
        if (p->company_followers < 0 || p->industry_followers < 0) {
          return "INDUSTRY with negative follower counts";
        }
      }
      return std::nullopt;
    }
    case EventKind::GRAPH_EDGE: {
      const auto* p = std::get_if<GraphEdgePayload>(&ev.payload);
      if (!p) return "GRAPH_EDGE event without edge payload";
      if (ev.attribution != Attribution::GRAPH) return "GRAPH_EDGE must carry GRAPH attribution";
      if (p->actor.empty()) return "GRAPH_EDGE with empty actor";
      if (p->actor == ev.subject) return "GRAPH_EDGE self loop";
      bool ok = (ev.network == Network::TW &&
                 (p->edge_set == EdgeSet::FOLLOWERS || p->edge_set == EdgeSet::FOLLOWING)) ||
                (ev.network == Network::FB && p->edge_set == EdgeSet::FRIENDS);
      if (!ok) {
        return "edge set " + std::string(to_string(p->edge_set)) + " not valid on network " +
               std::string(to_string(ev.network));
      }
      return std::nullopt;
    }
    case EventKind::SHARED_DOC: {
      const auto* p = std::get_if<SharedDocPayload>(&ev.payload);
      if (!p) return "SHARED_DOC event without doc payload";
      if (ev.network != Network::TW) return "SHARED_DOC events exist only on TW";
      if (ev.attribution != Attribution::GENERATED) return "SHARED_DOC must be GENERATED";
      if (p->doc_id.empty()) return "SHARED_DOC with empty doc_id";
      if (p->reactions < 0) return "SHARED_DOC with negative reactions";
      return std::nullopt;
    }
    case EventKind::WIKI_PAGE: {
      const auto* p = std::get_if<WikiPagePayload>(&ev.payload);
      if (!p) return "WIKI_PAGE event without page payload";
      if (ev.network != Network::WIKI) return "WIKI_PAGE events exist only on WIKI";
      if (ev.attribution != Attribution::CREDITED) return "WIKI_PAGE must be CREDITED";
      if (p->inlinks < 0 || p->outlinks < 0) return "WIKI_PAGE with negative link counts";
      return std::nullopt;
    }
  }
  return "unknown event kind";
}

std::string write_event(const EventRecord& ev) {
  ordered_json j;
  j["kind"] = std::string(to_string(ev.kind));
  j["network"] = std::string(to_string(ev.network));
  j["attribution"] = std::string(to_string(ev.attribution));
  j["subject"] = ev.subject;
  j["ts"] = ev.ts;
  ordered_json p;
  switch (ev.kind) {
    case EventKind::MESSAGE: {
      const auto& m = std::get<MessagePayload>(ev.payload);
      p["text"] = m.text;
      p["source"] = std::string(to_string(m.source));
      break;
    }
    case EventKind::LIST: {
      const auto& l = std::get<ListPayload>(ev.payload);
      p["list_name"] = l.list_name;
      p["role"] = std::string(to_string(l.role));
      break;
    }
    case EventKind::PROFILE_FIELD: {
      const auto& f = std::get<ProfileFieldPayload>(ev.payload);
      p["field"] = std::string(to_string(f.field));
      if (f.field == ProfileField::LIST_TOTAL) {
        p["count"] = f.count;
      } else {
        p["text"] = f.text;
        if (f.field == ProfileField::INDUSTRY) {
          p["company_followers"] = f.company_followers;
          p["industry_followers"] = f.industry_followers;
        }
      }
      break;
    }
    case EventKind::GRAPH_EDGE: {
      const auto& g = std::get<GraphEdgePayload>(ev.payload);
      p["actor"] = g.actor;
      p["edge_set"] = std::string(to_string(g.edge_set));
      break;
    }
    case EventKind::SHARED_DOC: {
      const auto& d = std::get<SharedDocPayload>(ev.payload);
      p["doc_id"] = d.doc_id;
      p["text"] = d.text;
      p["reactions"] = d.reactions;
      break;
    }
    case EventKind::WIKI_PAGE: {
      const auto& w = std::get<WikiPagePayload>(ev.payload);
      p["text"] = w.text;
      p["inlinks"] = w.inlinks;
      p["outlinks"] = w.outlinks;
      break;
    }
  }
  j["payload"] = std::move(p);
  return j.dump();
}

namespace {

std::string field_string(const ordered_json& j, const char* key) {
  if (!j.contains(key)) throw std::runtime_error(std::string("missing field ") + key);
  const auto& v = j.at(key);
  if (!v.is_string()) throw std::runtime_error(std::string("field ") + key + " must be a string");
  return v.get<std::string>();
}

int64_t field_int(const ordered_json& j, const char* key) {
  if (!j.contains(key)) throw std::runtime_error(std::string("missing field ") + key);
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw std::runtime_error(std::string("field ") + key + " must be an integer");
  return v.get<int64_t>();
}

double field_number(const ordered_json& j, const char* key) {
  if (!j.contains(key)) throw std::runtime_error(std::string("missing field ") + key);
  const auto& v = j.at(key);
  if (!v.is_number()) throw std::runtime_error(std::string("field ") + key + " must be a number");
  return v.get<double>();
}

}  // namespace

EventRecord parse_event(std::string_view json_line) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_line);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("bad json: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("event line is not a json object");

  EventRecord ev;
  std::string kind_s = field_string(j, "kind");
  auto kind = event_kind_from_string(kind_s);
  if (!kind) throw std::runtime_error("unknown kind " + kind_s);
  ev.kind = *kind;

  std::string net_s = field_string(j, "network");
  auto net = network_from_string(net_s);
  if (!net) throw std::runtime_error("unknown network " + net_s);
  ev.network = *net;

  std::string attr_s = field_string(j, "attribution");
  auto attr = attribution_from_string(attr_s);
  if (!attr) throw std::runtime_error("unknown attribution " + attr_s);
  ev.attribution = *attr;

  ev.subject = field_string(j, "subject");
  ev.ts = field_int(j, "ts");

  if (!j.contains("payload") || !j.at("payload").is_object()) {
    throw std::runtime_error("missing payload object");
  }
  const auto& p = j.at("payload");

  switch (ev.kind) {
    case EventKind::MESSAGE: {
      MessagePayload m;
      m.text = field_string(p, "text");
      std::string src_s = field_string(p, "source");
      auto src = source_from_string(src_s);
      if (!src) throw std::runtime_error("unknown source " + src_s);
      m.source = *src;
      ev.payload = std::move(m);
      break;
    }
    case EventKind::LIST: {
      ListPayload l;
      l.list_name = field_string(p, "list_name");
      std::string role_s = field_string(p, "role");
      auto role = list_role_from_string(role_s);
      if (!role) throw std::runtime_error("unknown list role " + role_s);
      l.role = *role;
      ev.payload = std::move(l);
      break;
    }
    case EventKind::PROFILE_FIELD: {
      ProfileFieldPayload f;
      std::string field_s = field_string(p, "field");
      auto field = profile_field_from_string(field_s);
      if (!field) throw std::runtime_error("unknown profile field " + field_s);
      f.field = *field;
      if (f.field == ProfileField::LIST_TOTAL) {
        f.count = field_int(p, "count");
      } else {
        f.text = field_string(p, "text");
        if (f.field == ProfileField::INDUSTRY) {
          f.company_followers = field_number(p, "company_followers");
          f.industry_followers = field_number(p, "industry_followers");
        }
      }
      ev.payload = std::move(f);
      break;
    }
    case EventKind::GRAPH_EDGE: {
      GraphEdgePayload g;
      g.actor = field_string(p, "actor");
      std::string set_s = field_string(p, "edge_set");
      auto set = edge_set_from_string(set_s);
      if (!set) throw std::runtime_error("unknown edge set " + set_s);
      g.edge_set = *set;
      ev.payload = std::move(g);
      break;
    }
    case EventKind::SHARED_DOC: {
      SharedDocPayload d;
      d.doc_id = field_string(p, "doc_id");
      d.text = field_string(p, "text");
      d.reactions = field_int(p, "reactions");
      ev.payload = std::move(d);
      break;
    }
    case EventKind::WIKI_PAGE: {
      WikiPagePayload w;
      w.text = field_string(p, "text");
      w.inlinks = field_int(p, "inlinks");
      w.outlinks = field_int(p, "outlinks");
      ev.payload = std::move(w);
      break;
    }
  }
  return ev;
}

ReadResult read_events(const std::string& path) {
  require_file(path, "events file");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ReadResult result;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++result.total_lines;
    EventRecord ev;
    try {
      ev = parse_event(line);
    } catch (const std::exception& e) {
      result.rejects.push_back({line_no, e.what()});
      continue;
    }
    if (auto reason = validate_event(ev)) {
      result.rejects.push_back({line_no, *reason});
      continue;
    }
    result.events.push_back(std::move(ev));
  }
  return result;
}

std::vector<EventRecord> read_valid_events(const std::string& path) {
  ReadResult r = read_events(path);
  if (!r.rejects.empty()) {
    const auto& first = r.rejects.front();
    throw std::runtime_error(path + ": line " + std::to_string(first.line_no) +
                             ": " + first.reason);
  }
  return std::move(r.events);
}

void write_events(const std::vector<EventRecord>& events, const std::string& path) {
  std::ostringstream out;
  for (const auto& ev : events) out << write_event(ev) << '\n';
  write_file(path, out.str());
}

std::vector<std::string> collect_users(const std::vector<EventRecord>& events) {
  std::set<std::string> users;
  for (const auto& ev : events) {
    users.insert(ev.subject);
    if (const auto* g = std::get_if<GraphEdgePayload>(&ev.payload)) users.insert(g->actor);
  }
  return {users.begin(), users.end()};
}

}  // namespace topex
