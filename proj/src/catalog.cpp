#include "topex/catalog.hpp"

#include <unordered_map>

#include "topex/util.hpp"

namespace topex {

namespace {

constexpr std::array<CatalogEntry, kCatalogSize> kCatalog = {{
    // Twitter
    {Network::TW, Source::MSG_TEXT, Attribution::GENERATED, "TW_MSG_TEXT_GENERATED"},
    {Network::TW, Source::MSG_TEXT, Attribution::REACTED, "TW_MSG_TEXT_REACTED"},
    {Network::TW, Source::MSG_TEXT, Attribution::CREDITED, "TW_MSG_TEXT_CREDITED"},
    {Network::TW, Source::HASHTAG, Attribution::GENERATED, "TW_HASHTAG_GENERATED"},
    {Network::TW, Source::HASHTAG, Attribution::REACTED, "TW_HASHTAG_REACTED"},
    {Network::TW, Source::HASHTAG, Attribution::CREDITED, "TW_HASHTAG_CREDITED"},
    {Network::TW, Source::LIST, Attribution::CREDITED, "TW_LIST_CREDITED"},
    {Network::TW, Source::LIST, Attribution::GENERATED, "TW_LIST_GENERATED"},
    {Network::TW, Source::URL, Attribution::GENERATED, "TW_URL_GENERATED"},
    {Network::TW, Source::URL, Attribution::REACTED, "TW_URL_REACTED"},
    {Network::TW, Source::URL_META, Attribution::GENERATED, "TW_URL_META_GENERATED"},
    {Network::TW, Source::URL_META, Attribution::REACTED, "TW_URL_META_REACTED"},
    {Network::TW, Source::SOCIAL_WWW, Attribution::GENERATED, "TW_SOCIAL_WWW_GENERATED"},
    {Network::TW, Source::FOLLOWERS, Attribution::GRAPH, "TW_FOLLOWERS_GRAPH"},
    {Network::TW, Source::FOLLOWING, Attribution::GRAPH, "TW_FOLLOWING_GRAPH"},
    // Facebook
    {Network::FB, Source::MSG_TEXT, Attribution::GENERATED, "FB_MSG_TEXT_GENERATED"},
    {Network::FB, Source::MSG_TEXT, Attribution::REACTED, "FB_MSG_TEXT_REACTED"},
    {Network::FB, Source::MSG_TEXT, Attribution::CREDITED, "FB_MSG_TEXT_CREDITED"},
    {Network::FB, Source::HASHTAG, Attribution::GENERATED, "FB_HASHTAG_GENERATED"},
    {Network::FB, Source::URL, Attribution::GENERATED, "FB_URL_GENERATED"},
    {Network::FB, Source::URL, Attribution::REACTED, "FB_URL_REACTED"},
    {Network::FB, Source::URL_META, Attribution::GENERATED, "FB_URL_META_GENERATED"},
    {Network::FB, Source::URL_META, Attribution::REACTED, "FB_URL_META_REACTED"},
    {Network::FB, Source::FRIENDS, Attribution::GRAPH, "FB_FRIENDS_GRAPH"},
    // Facebook fan pages
    {Network::FB_PAGE, Source::PAGE_TEXT, Attribution::GENERATED, "FB_PAGE_PAGE_TEXT_GENERATED"},
    {Network::FB_PAGE, Source::PAGE_TEXT, Attribution::REACTED, "FB_PAGE_PAGE_TEXT_REACTED"},
    // Google+
    {Network::GP, Source::MSG_TEXT, Attribution::GENERATED, "GP_MSG_TEXT_GENERATED"},
    {Network::GP, Source::MSG_TEXT, Attribution::REACTED, "GP_MSG_TEXT_REACTED"},
    {Network::GP, Source::MSG_TEXT, Attribution::CREDITED, "GP_MSG_TEXT_CREDITED"},
    {Network::GP, Source::HASHTAG, Attribution::GENERATED, "GP_HASHTAG_GENERATED"},
    {Network::GP, Source::URL, Attribution::GENERATED, "GP_URL_GENERATED"},
    {Network::GP, Source::URL, Attribution::REACTED, "GP_URL_REACTED"},
    {Network::GP, Source::URL_META, Attribution::GENERATED, "GP_URL_META_GENERATED"},
    {Network::GP, Source::URL_META, Attribution::REACTED, "GP_URL_META_REACTED"},
    // LinkedIn
    {Network::LI, Source::SKILLS, Attribution::GENERATED, "LI_SKILLS_GENERATED"},
    {Network::LI, Source::INDUSTRY, Attribution::GENERATED, "LI_INDUSTRY_GENERATED"},
    // Wikipedia
    {Network::WIKI, Source::WIKI_INOUT, Attribution::CREDITED, "WIKI_WIKI_INOUT_CREDITED"},
}};

struct NameTable {
  std::unordered_map<std::string_view, int> by_name;
  NameTable() {
    for (size_t i = 0; i < kCatalog.size(); ++i) by_name.emplace(kCatalog[i].name, static_cast<int>(i));
  }
};

const NameTable& name_table() {
  static const NameTable t;
  return t;
}

}  // namespace

std::string_view to_string(Network n) {
  switch (n) {
    case Network::TW: return "TW";
    case Network::FB: return "FB";
    case Network::FB_PAGE: return "FB_PAGE";
    case Network::GP: return "GP";
    case Network::LI: return "LI";
    case Network::WIKI: return "WIKI";
  }
  return "?";
}

std::string_view to_string(Source s) {
  switch (s) {
    case Source::MSG_TEXT: return "MSG_TEXT";
    case Source::PAGE_TEXT: return "PAGE_TEXT";
    case Source::HASHTAG: return "HASHTAG";
    case Source::LIST: return "LIST";
    case Source::SKILLS: return "SKILLS";
    case Source::INDUSTRY: return "INDUSTRY";
    case Source::FOLLOWERS: return "FOLLOWERS";
    case Source::FOLLOWING: return "FOLLOWING";
    case Source::FRIENDS: return "FRIENDS";
    case Source::URL: return "URL";
    case Source::URL_META: return "URL_META";
    case Source::SOCIAL_WWW: return "SOCIAL_WWW";
    case Source::WIKI_INOUT: return "WIKI_INOUT";
  }
  return "?";
}

std::string_view to_string(Attribution a) {
  switch (a) {
    case Attribution::GENERATED: return "GENERATED";
    case Attribution::REACTED: return "REACTED";
    case Attribution::CREDITED: return "CREDITED";
    case Attribution::GRAPH: return "GRAPH";
  }
  return "?";
}

std::optional<Network> network_from_string(std::string_view s) {
  if (s == "TW") return Network::TW;
  if (s == "FB") return Network::FB;
  if (s == "FB_PAGE") return Network::FB_PAGE;
  if (s == "GP") return Network::GP;
  if (s == "LI") return Network::LI;
  if (s == "WIKI") return Network::WIKI;
  return std::nullopt;
}

std::optional<Source> source_from_string(std::string_view s) {
  if (s == "MSG_TEXT") return Source::MSG_TEXT;
  if (s == "PAGE_TEXT") return Source::PAGE_TEXT;
  if (s == "HASHTAG") return Source::HASHTAG;
  if (s == "LIST") return Source::LIST;
  if (s == "SKILLS") return Source::SKILLS;
  if (s == "INDUSTRY") return Source::INDUSTRY;
  if (s == "FOLLOWERS") return Source::FOLLOWERS;
  if (s == "FOLLOWING") return Source::FOLLOWING;
  if (s == "FRIENDS") return Source::FRIENDS;
  if (s == "URL") return Source::URL;
  if (s == "URL_META") return Source::URL_META;
  if (s == "SOCIAL_WWW") return Source::SOCIAL_WWW;
  if (s == "WIKI_INOUT") return Source::WIKI_INOUT;
  return std::nullopt;
}

std::optional<Attribution> attribution_from_string(std::string_view s) {
  if (s == "GENERATED") return Attribution::GENERATED;
  if (s == "REACTED") return Attribution::REACTED;
  if (s == "CREDITED") return Attribution::CREDITED;
  if (s == "GRAPH") return Attribution::GRAPH;
  return std::nullopt;
}

const std::array<CatalogEntry, kCatalogSize>& catalog() { return kCatalog; }

int catalog_index(Network n, Source s, Attribution a) {
  for (size_t i = 0; i < kCatalog.size(); ++i) {
    const auto& e = kCatalog[i];
    if (e.network == n && e.source == s && e.attribution == a) return static_cast<int>(i);
  }
  return -1;
}

int catalog_index(std::string_view name) {
  const auto& t = name_table().by_name;
  auto it = t.find(name);
  return it == t.end() ? -1 : it->second;
}

std::string_view catalog_name(int index) { return kCatalog.at(static_cast<size_t>(index)).name; }

Network catalog_network(int index) { return kCatalog.at(static_cast<size_t>(index)).network; }

std::pair<int, int> catalog_network_span(Network n) {
  int first = -1;
  int last = -1;
  for (size_t i = 0; i < kCatalog.size(); ++i) {
    if (kCatalog[i].network == n) {
      if (first < 0) first = static_cast<int>(i);
      last = static_cast<int>(i) + 1;
    }
  }
  return {first, last};
}

uint64_t catalog_fingerprint() {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& e : kCatalog) {
    for (unsigned char c : e.name) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= '\n';
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace topex
