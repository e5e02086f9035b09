#include <set>
#include <string>

#include "doctest.h"
#include "topex/catalog.hpp"
#include "topex/util.hpp"

using namespace topex;

TEST_CASE("catalog has 37 uniquely named entries") {
  const auto& entries = catalog();
  CHECK(entries.size() == 37);
  std::set<std::string> names;
  for (const auto& e : entries) names.insert(std::string(e.name));
  CHECK(names.size() == 37);
}

TEST_CASE("catalog_index round-trips by triple and by name") {
  const auto& entries = catalog();
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    CHECK(catalog_index(e.network, e.source, e.attribution) == static_cast<int>(i));
    CHECK(catalog_index(e.name) == static_cast<int>(i));
    CHECK(catalog_name(static_cast<int>(i)) == e.name);
    CHECK(catalog_network(static_cast<int>(i)) == e.network);
  }
  CHECK(catalog_index(Network::GP, Source::LIST, Attribution::GENERATED) == -1);
  CHECK(catalog_index("NOT_A_FEATURE") == -1);
}

TEST_CASE("network spans partition the catalog in order") {
  int cursor = 0;
  for (size_t n = 0; n < kNetworkCount; ++n) {
    auto [first, last] = catalog_network_span(static_cast<Network>(n));
    CHECK(first == cursor);
    CHECK(last > first);
    for (int i = first; i < last; ++i) {
      CHECK(catalog_network(i) == static_cast<Network>(n));
    }
    cursor = last;
  }
  CHECK(cursor == static_cast<int>(kCatalogSize));
}

TEST_CASE("committed registry file matches the compiled catalog") {
  std::string path = std::string(TOPEX_SOURCE_DIR) + "/data/feature_catalog.tsv";
  std::string content = read_file(path, "feature catalog registry");
  const auto& entries = catalog();
  size_t seen = 0;
  bool fingerprint_seen = false;
  for (const auto& line : split(content, '\n')) {
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (line[0] == '#') {
      if (fields[0] == "# fingerprint") {
        REQUIRE(fields.size() == 2);
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(catalog_fingerprint()));
        CHECK(fields[1] == buf);
        fingerprint_seen = true;
      }
      continue;
    }
    REQUIRE(fields.size() == 5);
    size_t slot = static_cast<size_t>(parse_int(fields[0], "registry slot"));
    REQUIRE(slot < entries.size());
    const auto& e = entries[slot];
    CHECK(fields[1] == to_string(e.network));
    CHECK(fields[2] == to_string(e.source));
    CHECK(fields[3] == to_string(e.attribution));
    CHECK(fields[4] == e.name);
    ++seen;
  }
  CHECK(seen == entries.size());
  CHECK(fingerprint_seen);
}

TEST_CASE("enum string round-trips") {
  for (size_t n = 0; n < kNetworkCount; ++n) {
    auto net = static_cast<Network>(n);
    CHECK(network_from_string(to_string(net)) == net);
  }
  CHECK(!network_from_string("MYSPACE").has_value());
}
