#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace topex {

enum class Network : uint8_t { TW, FB, FB_PAGE, GP, LI, WIKI };
enum class Source : uint8_t {
  MSG_TEXT,
  PAGE_TEXT,
  HASHTAG,
  LIST,
  SKILLS,
  INDUSTRY,
  FOLLOWERS,
  FOLLOWING,
  FRIENDS,
  URL,
  URL_META,
  SOCIAL_WWW,
  WIKI_INOUT,
};
enum class Attribution : uint8_t { GENERATED, REACTED, CREDITED, GRAPH };

inline constexpr size_t kNetworkCount = 6;

std::string_view to_string(Network n);
std::string_view to_string(Source s);
std::string_view to_string(Attribution a);
std::optional<Network> network_from_string(std::string_view s);
std::optional<Source> source_from_string(std::string_view s);
std::optional<Attribution> attribution_from_string(std::string_view s);

// One registered feature: a (network, source, attribution) triple with its
// canonical <Network>_<Source>_<Attribution> name.
struct CatalogEntry {
  Network network;
  Source source;
  Attribution attribution;
  std::string_view name;
};

inline constexpr size_t kCatalogSize = 37;

// The frozen registry, in persistence order. Indices into this array are the
// slots of every feature vector and weight vector in the system.
const std::array<CatalogEntry, kCatalogSize>& catalog();

// -1 when the triple (or name) is not registered.
int catalog_index(Network n, Source s, Attribution a);
int catalog_index(std::string_view name);
std::string_view catalog_name(int index);
Network catalog_network(int index);

// Slot range [first, last) for one network; slots of a network are contiguous.
std::pair<int, int> catalog_network_span(Network n);

// FNV-1a over the ordered catalog names; stamped into model files so a model
// can never be applied against a different registry.
uint64_t catalog_fingerprint();

}  // namespace topex
