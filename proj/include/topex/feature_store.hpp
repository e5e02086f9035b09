#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "topex/catalog.hpp"

namespace topex {

using FeatureRow = std::array<double, kCatalogSize>;

// Sparse (user, topic) -> 37-slot feature vector. Only positive values are
// persisted; an absent row reads as all zeros.
class FeatureStore {
 public:
  void add(const std::string& user, const std::string& topic, int slot, double value);
  void set(const std::string& user, const std::string& topic, int slot, double value);
  double get(const std::string& user, const std::string& topic, int slot) const;
  const FeatureRow* row(const std::string& user, const std::string& topic) const;
  FeatureRow& row_mut(const std::string& user, const std::string& topic);

  bool normalized() const { return normalized_; }
  void set_normalized(bool v) { normalized_ = v; }

  size_t row_count() const { return rows_.size(); }

  // (user, topic) keys in lexicographic order; the canonical iteration order
  // for every serialization and reduction.
  std::vector<std::pair<std::string, std::string>> sorted_keys() const;

  // Users holding any positive value, sorted.
  std::vector<std::string> users() const;

  static std::string key_of(const std::string& user, const std::string& topic);
  static std::pair<std::string, std::string> split_key(const std::string& key);

  const std::unordered_map<std::string, FeatureRow>& raw_map() const { return rows_; }

 private:
  std::unordered_map<std::string, FeatureRow> rows_;  // key: user '\t' topic
  bool normalized_ = false;
};

// Line format: user<TAB>topic<TAB>feature_id<TAB>value, positive values only,
// sorted by (user, topic, catalog slot). Header carries the normalized flag.
void save_feature_store(const FeatureStore& store, const std::string& path);
FeatureStore load_feature_store(const std::string& path);

}  // namespace topex
