#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "topex/catalog.hpp"
#include "topex/feature_store.hpp"
#include "topex/groundtruth.hpp"
#include "topex/nnls.hpp"

namespace topex {

// First-step model: non-negative weights over one network's catalog span.
struct NetworkModel {
  Network network = Network::TW;
  std::vector<double> weights;  // length = span size, slot order
  bool degenerate = false;      // no usable training rows
};

// Final model: per-network weights combined with the global network weights
// into one 37-slot vector, w_k = netweight_k * g_{network(k)}.
struct ExpertiseModel {
  std::array<NetworkModel, kNetworkCount> networks;
  std::array<double, kNetworkCount> global{};
  FeatureRow final_weights{};
  uint64_t seed = 0;
  bool degenerate = false;  // no network produced a usable model
};

// Step one: NNLS of pairwise deltas restricted to the network's features
// against the labels. Rows with no signal inside the span are dropped.
NetworkModel train_network_model(Network network, const std::vector<PairLabel>& train,
                                 const FeatureStore& norm);

// Step two: NNLS over per-network score deltas (network models applied to
// the same rows) against the labels.
std::array<double, kNetworkCount> train_global_model(
    const std::vector<PairLabel>& train, const std::array<NetworkModel, kNetworkCount>& models,
    const FeatureStore& norm);

ExpertiseModel finalize_weights(const std::array<NetworkModel, kNetworkCount>& models,
                                const std::array<double, kNetworkCount>& global, uint64_t seed);

// Both steps. Labels are canonicalized (sorted) first so the result is
// independent of input order.
ExpertiseModel train(const std::vector<PairLabel>& train, const FeatureStore& norm, uint64_t seed);

// E(u, t): dot product of the final weights with the user's normalized
// feature vector; 0 when the user has no row.
double score(const std::string& user, const std::string& topic, const ExpertiseModel& model,
             const FeatureStore& norm);

struct ScoreRow {
  std::string user;
  std::string topic;
  double score = 0.0;
};

// Scores every (user, topic) row of the store; keeps positive scores only,
// sorted by (user, topic).
std::vector<ScoreRow> score_all(const ExpertiseModel& model, const FeatureStore& norm);

namespace ref {
// Serial reference; must produce bit-identical rows.
std::vector<ScoreRow> score_all(const ExpertiseModel& model, const FeatureStore& norm);
}  // namespace ref

// Model file: a header line carrying the catalog fingerprint, the seed and a
// creation stamp, then one W line per catalog slot and one G line per
// network. Loading verifies the fingerprint. The creation stamp honors
// SOURCE_DATE_EPOCH and falls back to "-" so reruns stay byte-identical.
void save_model(const ExpertiseModel& model, const std::string& path);
ExpertiseModel load_model(const std::string& path);

// Score file: user<TAB>topic<TAB>score.
void save_scores(const std::vector<ScoreRow>& scores, const std::string& path);
std::vector<ScoreRow> load_scores(const std::string& path);

}  // namespace topex
