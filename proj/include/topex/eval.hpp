#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "topex/feature_store.hpp"
#include "topex/groundtruth.hpp"
#include "topex/model.hpp"
#include "topex/ontology.hpp"

namespace topex {

inline constexpr int kModelSlot = -1;  // evaluate the model instead of one feature

struct FeatureMetrics {
  std::string feature;  // catalog name, or "MODEL"
  int64_t labels = 0;
  int64_t predicted = 0;  // labels with a non-zero delta
  int64_t correct = 0;    // predicted with the right sign
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double coverage = 0.0;  // users with a non-zero value anywhere / corpus users
  bool flagged = false;   // no labels to evaluate
};

// A label is predicted iff its delta is non-zero and correct iff
// label * sgn(delta) > 0. slot = kModelSlot scores deltas with the model's
// final weights; the model may be null for plain feature slots.
FeatureMetrics evaluate_feature(int slot, const std::vector<PairLabel>& labels,
                                const FeatureStore& norm,
                                const std::vector<std::string>& corpus_users,
                                const ExpertiseModel* model = nullptr);

// All 37 features plus the MODEL row, in catalog order.
std::vector<FeatureMetrics> evaluate_all(const std::vector<PairLabel>& labels,
                                         const FeatureStore& norm,
                                         const std::vector<std::string>& corpus_users,
                                         const ExpertiseModel& model);

inline constexpr int kHeatmapBuckets = 9;  // log10 connectivity 10^0 .. 10^8

// Cell (i, j): mean |delta| over correctly predicted labels whose users'
// connectivities fall in buckets i (u1) and j (u2).
struct HeatmapGrid {
  std::array<std::array<double, kHeatmapBuckets>, kHeatmapBuckets> mean_abs_delta{};
  std::array<std::array<int64_t, kHeatmapBuckets>, kHeatmapBuckets> count{};
  int64_t skipped_missing = 0;  // labels lacking a connectivity value
};

HeatmapGrid predictability_heatmap(int slot, const std::vector<PairLabel>& labels,
                                   const FeatureStore& norm,
                                   const std::unordered_map<std::string, double>& connectivity,
                                   const ExpertiseModel* model = nullptr);

// Report files consumable by any plotting tool:
//  dist_feature_values.tsv        feature, log10 bucket, count, density
//  dist_connectivity_coverage.tsv feature, connectivity bucket, users
//  dist_gt_delta.tsv              feature, sign, |delta| log10 bucket, count
void export_distributions(const FeatureStore& raw,
                          const std::unordered_map<std::string, double>& connectivity,
                          const std::vector<PairLabel>& labels, const FeatureStore& norm,
                          const std::string& dir);

struct SupertopicRow {
  std::string network;  // network name or "ALL"
  std::string super_slug;
  int64_t users = 0;
  double percent = 0.0;
};

struct SupertopicTable {
  std::vector<SupertopicRow> rows;
  std::map<std::string, int64_t> excluded;  // per network: users with no score
};

// Per network and combined: percentage of users whose strongest super-topic
// (largest summed score across the super's subtree) is each super.
SupertopicTable supertopic_rollup(const ExpertiseModel& model, const FeatureStore& norm,
                                  const TopicOntology& ont);

void save_feature_metrics(const std::vector<FeatureMetrics>& metrics, const std::string& path);
void save_heatmaps(const std::vector<std::pair<std::string, HeatmapGrid>>& grids,
                   const std::string& path);
void save_supertopic_table(const SupertopicTable& table, const std::string& path);

}  // namespace topex
