#pragma once

#include <string>

#include "topex/feature_store.hpp"

namespace topex {

// Rescales every raw value to log1p(v) / max_u log1p(v), the max taken per
// (feature, topic) group. Monotone within each group; the group maximum maps
// to exactly 1. Raw zeros stay absent.
FeatureStore normalize_store(const FeatureStore& raw);

namespace ref {
// Serial reference; must produce a bit-identical store.
FeatureStore normalize_store(const FeatureStore& raw);
}  // namespace ref

// Elementwise f_hat(u1) - f_hat(u2) for one topic over the full catalog;
// absent values read as 0. Rows of the pairwise training matrix.
FeatureRow feature_delta(const std::string& u1, const std::string& u2, const std::string& topic,
                         const FeatureStore& norm);

}  // namespace topex
