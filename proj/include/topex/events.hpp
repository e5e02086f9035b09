#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "topex/catalog.hpp"

namespace topex {

enum class EventKind : uint8_t { MESSAGE, LIST, PROFILE_FIELD, GRAPH_EDGE, SHARED_DOC, WIKI_PAGE };
enum class ListRole : uint8_t { MEMBER, CREATOR, SUBSCRIBER };
enum class ProfileField : uint8_t { SKILLS, INDUSTRY, LIST_TOTAL };
enum class EdgeSet : uint8_t { FOLLOWERS, FOLLOWING, FRIENDS };

std::string_view to_string(EventKind k);
std::string_view to_string(ListRole r);
std::string_view to_string(ProfileField f);
std::string_view to_string(EdgeSet e);
std::optional<EventKind> event_kind_from_string(std::string_view s);
std::optional<ListRole> list_role_from_string(std::string_view s);
std::optional<ProfileField> profile_field_from_string(std::string_view s);
std::optional<EdgeSet> edge_set_from_string(std::string_view s);

struct MessagePayload {
  std::string text;
  Source source = Source::MSG_TEXT;  // MSG_TEXT, PAGE_TEXT, HASHTAG, URL, URL_META
};

struct ListPayload {
  std::string list_name;
  ListRole role = ListRole::MEMBER;
};

struct ProfileFieldPayload {
  ProfileField field = ProfileField::SKILLS;
  std::string text;              // SKILLS, INDUSTRY
  double company_followers = 0;  // INDUSTRY only
  double industry_followers = 0; // INDUSTRY only
  int64_t count = 0;             // LIST_TOTAL only
};

struct GraphEdgePayload {
  std::string actor;  // the other endpoint; subject is the scored user
  EdgeSet edge_set = EdgeSet::FOLLOWERS;
};

struct SharedDocPayload {
  std::string doc_id;
  std::string text;
  int64_t reactions = 0;
};

struct WikiPagePayload {
  std::string text;
  int64_t inlinks = 0;
  int64_t outlinks = 0;
};

using EventPayload = std::variant<MessagePayload, ListPayload, ProfileFieldPayload,
                                  GraphEdgePayload, SharedDocPayload, WikiPagePayload>;

struct EventRecord {
  EventKind kind = EventKind::MESSAGE;
  Network network = Network::TW;
  Attribution attribution = Attribution::GENERATED;
  std::string subject;  // user the event belongs to
  int64_t ts = 0;       // unix seconds
  EventPayload payload;
};

// Checks kind/network/attribution/payload coherence. Returns a reject reason,
// or nullopt if the event is acceptable. Missing catalog slots for otherwise
// well-formed events are not rejected here; extraction counts and skips them.
std::optional<std::string> validate_event(const EventRecord& ev);

// One canonical JSON line, no trailing newline.
std::string write_event(const EventRecord& ev);

// Throws std::runtime_error naming the problem on malformed JSON or fields.
EventRecord parse_event(std::string_view json_line);

struct RejectedLine {
  size_t line_no = 0;  // 1-based
  std::string reason;
};

struct ReadResult {
  std::vector<EventRecord> events;
  std::vector<RejectedLine> rejects;
  size_t total_lines = 0;  // non-empty lines seen
};

// Reads a JSON Lines file, validating each event. Invalid lines land in
// rejects instead of aborting the read.
ReadResult read_events(const std::string& path);

// Loads a file written by write_events; any invalid line throws. Use for
// files produced by ingest where rejects would mean corruption.
std::vector<EventRecord> read_valid_events(const std::string& path);

void write_events(const std::vector<EventRecord>& events, const std::string& path);

// Every identity an event mentions: subjects plus graph actors, sorted, unique.
std::vector<std::string> collect_users(const std::vector<EventRecord>& events);

}  // namespace topex
