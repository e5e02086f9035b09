#include "topex/normalize.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace topex {

namespace {

FeatureStore normalize_common(const FeatureStore& raw, bool parallel) {
  auto keys = raw.sorted_keys();

  // Pass 1: per (topic, slot) maximum of log1p(value). Max is order
  // independent, so a plain serial reduction is already canonical.
  std::map<std::string, FeatureRow> maxes;
  for (const auto& [user, topic] : keys) {
    const FeatureRow& row = *raw.row(user, topic);
    auto [it, inserted] = maxes.try_emplace(topic);
    if (inserted) it->second.fill(0.0);
    for (size_t k = 0; k < kCatalogSize; ++k) {
      if (row[k] > 0.0) {
        double lv = std::log1p(row[k]);
        if (lv > it->second[k]) it->second[k] = lv;
      }
    }
  }

  // Pass 2: rescale each row independently.
  std::vector<FeatureRow> rows(keys.size());
  auto rescale = [&](size_t i) {
    const auto& [user, topic] = keys[i];
    const FeatureRow& row = *raw.row(user, topic);
    const FeatureRow& m = maxes.at(topic);
    FeatureRow& out = rows[i];
    out.fill(0.0);
    for (size_t k = 0; k < kCatalogSize; ++k) {
      if (row[k] > 0.0 && m[k] > 0.0) out[k] = std::log1p(row[k]) / m[k];
    }
  };
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (size_t i = 0; i < keys.size(); ++i) rescale(i);
  } else {
    for (size_t i = 0; i < keys.size(); ++i) rescale(i);
  }

  FeatureStore out;
  out.set_normalized(true);
  for (size_t i = 0; i < keys.size(); ++i) {
    const auto& [user, topic] = keys[i];
    for (size_t k = 0; k < kCatalogSize; ++k) {
      if (rows[i][k] > 0.0) out.set(user, topic, static_cast<int>(k), rows[i][k]);
    }
  }
  return out;
}

}  // namespace

FeatureStore normalize_store(const FeatureStore& raw) { return normalize_common(raw, true); }

namespace ref {
FeatureStore normalize_store(const FeatureStore& raw) { return normalize_common(raw, false); }
}  // namespace ref

FeatureRow feature_delta(const std::string& u1, const std::string& u2, const std::string& topic,
                         const FeatureStore& norm) {
  FeatureRow delta;
  delta.fill(0.0);
  if (const FeatureRow* r1 = norm.row(u1, topic)) {
    for (size_t k = 0; k < kCatalogSize; ++k) delta[k] = (*r1)[k];
  }
  if (const FeatureRow* r2 = norm.row(u2, topic)) {
    for (size_t k = 0; k < kCatalogSize; ++k) delta[k] -= (*r2)[k];
  }
  return delta;
}

}  // namespace topex
