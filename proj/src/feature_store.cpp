#include "topex/feature_store.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "topex/util.hpp"

namespace topex {

namespace {

void check_slot(int slot) {
  if (slot < 0 || slot >= static_cast<int>(kCatalogSize)) {
    throw std::out_of_range("feature slot " + std::to_string(slot) + " out of range");
  }
}

}  // namespace

std::string FeatureStore::key_of(const std::string& user, const std::string& topic) {
  return user + '\t' + topic;
}

std::pair<std::string, std::string> FeatureStore::split_key(const std::string& key) {
  size_t tab = key.find('\t');
  return {key.substr(0, tab), key.substr(tab + 1)};
}

void FeatureStore::add(const std::string& user, const std::string& topic, int slot, double value) {
  check_slot(slot);
  if (value == 0.0) return;
  auto [it, inserted] = rows_.try_emplace(key_of(user, topic));
  if (inserted) it->second.fill(0.0);
  it->second[slot] += value;
}

void FeatureStore::set(const std::string& user, const std::string& topic, int slot, double value) {
  check_slot(slot);
  auto [it, inserted] = rows_.try_emplace(key_of(user, topic));
  if (inserted) it->second.fill(0.0);
  it->second[slot] = value;
}

double FeatureStore::get(const std::string& user, const std::string& topic, int slot) const {
  check_slot(slot);
  auto it = rows_.find(key_of(user, topic));
  return it == rows_.end() ? 0.0 : it->second[slot];
}

const FeatureRow* FeatureStore::row(const std::string& user, const std::string& topic) const {
  auto it = rows_.find(key_of(user, topic));
  return it == rows_.end() ? nullptr : &it->second;
}

FeatureRow& FeatureStore::row_mut(const std::string& user, const std::string& topic) {
  auto [it, inserted] = rows_.try_emplace(key_of(user, topic));
  if (inserted) it->second.fill(0.0);
  return it->second;
}

std::vector<std::pair<std::string, std::string>> FeatureStore::sorted_keys() const {
  std::vector<std::string> keys;
  keys.reserve(rows_.size());
  for (const auto& [key, row] : rows_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(keys.size());
  for (const auto& key : keys) out.push_back(split_key(key));
  return out;
}

std::vector<std::string> FeatureStore::users() const {
  std::set<std::string> users;
  for (const auto& [key, row] : rows_) {
    for (double v : row) {
      if (v > 0.0) {
        users.insert(split_key(key).first);
        break;
      }
    }
  }
  return {users.begin(), users.end()};
}

void save_feature_store(const FeatureStore& store, const std::string& path) {
  std::ostringstream out;
  out << "# features\tnormalized=" << (store.normalized() ? "true" : "false") << "\n";
  for (const auto& [user, topic] : store.sorted_keys()) {
    const FeatureRow& row = *store.row(user, topic);
    for (size_t k = 0; k < kCatalogSize; ++k) {
      if (row[k] > 0.0) {
        out << user << '\t' << topic << '\t' << catalog_name(static_cast<int>(k)) << '\t'
            << format_double(row[k]) << "\n";
      }
    }
  }
  write_file(path, out.str());
}

FeatureStore load_feature_store(const std::string& path) {
  require_file(path, "feature store file");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  FeatureStore store;
  std::string line;
  size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!saw_header && line.find("normalized=true") != std::string::npos) store.set_normalized(true);
      saw_header = true;
      continue;
    }
    auto fields = split(line, '\t');
    if (fields.size() != 4) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected 4 fields");
    }
    int slot = catalog_index(fields[2]);
    if (slot < 0) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": unknown feature " + fields[2]);
    }
    double value = parse_double(fields[3], path + " line " + std::to_string(line_no));
    if (!(value > 0.0)) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": non-positive value");
    }
    store.set(fields[0], fields[1], slot, value);
  }
  return store;
}

}  // namespace topex
