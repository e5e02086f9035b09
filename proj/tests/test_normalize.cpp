#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "topex/normalize.hpp"

using namespace topex;

namespace {

FeatureStore random_store(std::mt19937_64& gen, int users, int topics, double density) {
  FeatureStore store;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> mag(0.3);
  for (int u = 0; u < users; ++u) {
    for (int t = 0; t < topics; ++t) {
      for (size_t slot = 0; slot < kCatalogSize; ++slot) {
        if (unit(gen) < density) {
          store.add("u" + std::to_string(u), "t" + std::to_string(t), static_cast<int>(slot),
                    mag(gen));
        }
      }
    }
  }
  return store;
}

}  // namespace

TEST_CASE("normalization properties hold over 1000 random stores") {
  std::mt19937_64 gen(20240817);
  for (int trial = 0; trial < 1000; ++trial) {
    FeatureStore raw = random_store(gen, 2 + static_cast<int>(gen() % 6),
                                    1 + static_cast<int>(gen() % 3), 0.12);
    FeatureStore norm = normalize_store(raw);
    CHECK(norm.normalized());

    // Group values by (feature, topic) to check range, argmax, and max-to-1.
    std::map<std::pair<int, std::string>, std::vector<std::pair<std::string, double>>> raw_groups;
    for (const auto& [user, topic] : raw.sorted_keys()) {
      const FeatureRow* row = raw.row(user, topic);
      for (size_t slot = 0; slot < kCatalogSize; ++slot) {
        if ((*row)[slot] > 0.0) {
          raw_groups[{static_cast<int>(slot), topic}].push_back({user, (*row)[slot]});
        }
      }
    }
    for (const auto& [key, members] : raw_groups) {
      auto [slot, topic] = key;
      double best_raw = -1.0;
      std::string best_user;
      for (const auto& [user, value] : members) {
        if (value > best_raw) {
          best_raw = value;
          best_user = user;
        }
      }
      double best_norm = -1.0;
      std::string best_norm_user;
      double max_norm = 0.0;
      for (const auto& [user, value] : members) {
        const FeatureRow* row = norm.row(user, topic);
        REQUIRE(row != nullptr);
        double v = (*row)[slot];
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        if (v > best_norm) {
          best_norm = v;
          best_norm_user = user;
        }
        max_norm = std::max(max_norm, v);
      }
      CHECK(best_norm_user == best_user);  // argmax preserved
      CHECK(max_norm == 1.0);              // group max maps to exactly 1
    }
  }
}

TEST_CASE("normalization preserves within-group value order") {
  std::mt19937_64 gen(5150);
  for (int trial = 0; trial < 50; ++trial) {
    FeatureStore raw = random_store(gen, 12, 2, 0.3);
    FeatureStore norm = normalize_store(raw);
    for (const auto& [user_a, topic] : raw.sorted_keys()) {
      for (const auto& [user_b, topic_b] : raw.sorted_keys()) {
        if (topic != topic_b) continue;
        const FeatureRow* raw_a = raw.row(user_a, topic);
        const FeatureRow* raw_b = raw.row(user_b, topic);
        const FeatureRow* norm_a = norm.row(user_a, topic);
        const FeatureRow* norm_b = norm.row(user_b, topic);
        for (size_t slot = 0; slot < kCatalogSize; slot += 7) {
          double ra = (*raw_a)[slot];
          double rb = (*raw_b)[slot];
          double na = (*norm_a)[slot];
          double nb = (*norm_b)[slot];
          if (ra < rb) CHECK(na <= nb);
          if (ra == rb) CHECK(na == nb);
        }
      }
    }
  }
}

TEST_CASE("normalized values follow the log-scale formula exactly") {
  FeatureStore raw;
  raw.add("u1", "t1", 0, 9.0);
  raw.add("u2", "t1", 0, 99.0);
  raw.add("u3", "t2", 0, 5.0);  // separate topic group
  FeatureStore norm = normalize_store(raw);
  double expected = std::log1p(9.0) / std::log1p(99.0);
  CHECK((*norm.row("u1", "t1"))[0] == expected);
  CHECK((*norm.row("u2", "t1"))[0] == 1.0);
  CHECK((*norm.row("u3", "t2"))[0] == 1.0);
}

TEST_CASE("renormalizing a normalized store keeps range and argmax") {
  std::mt19937_64 gen(31);
  FeatureStore raw = random_store(gen, 10, 2, 0.25);
  FeatureStore once = normalize_store(raw);
  FeatureStore twice = normalize_store(once);
  for (const auto& [user, topic] : once.sorted_keys()) {
    const FeatureRow* a = once.row(user, topic);
    const FeatureRow* b = twice.row(user, topic);
    REQUIRE(b != nullptr);
    for (size_t slot = 0; slot < kCatalogSize; ++slot) {
      CHECK((*b)[slot] >= 0.0);
      CHECK((*b)[slot] <= 1.0);
      if ((*a)[slot] == 1.0) CHECK((*b)[slot] == 1.0);
    }
  }
}

TEST_CASE("parallel normalization matches the serial reference bit for bit") {
  std::mt19937_64 gen(99);
  FeatureStore raw = random_store(gen, 60, 4, 0.2);
  FeatureStore par = normalize_store(raw);
  FeatureStore ser = ref::normalize_store(raw);
  REQUIRE(par.row_count() == ser.row_count());
  for (const auto& [user, topic] : ser.sorted_keys()) {
    const FeatureRow* a = ser.row(user, topic);
    const FeatureRow* b = par.row(user, topic);
    REQUIRE(b != nullptr);
    for (size_t slot = 0; slot < kCatalogSize; ++slot) CHECK((*a)[slot] == (*b)[slot]);
  }
}

TEST_CASE("feature_delta subtracts rows and treats missing rows as zero") {
  FeatureStore norm;
  norm.add("u1", "t1", 0, 0.8);
  norm.add("u1", "t1", 5, 0.2);
  norm.add("u2", "t1", 0, 0.5);
  norm.set_normalized(true);
  FeatureRow d = feature_delta("u1", "u2", "t1", norm);
  CHECK(d[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(d[5] == doctest::Approx(0.2).epsilon(1e-12));
  FeatureRow missing = feature_delta("u1", "ghost", "t1", norm);
  CHECK(missing[0] == doctest::Approx(0.8).epsilon(1e-12));
  FeatureRow both_missing = feature_delta("ghostA", "ghostB", "t1", norm);
  for (size_t k = 0; k < kCatalogSize; ++k) CHECK(both_missing[k] == 0.0);
}
