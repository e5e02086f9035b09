#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace topex {

// One evaluator's ranking of the candidates for one topic, best expert first.
struct SortedEvaluation {
  std::string evaluator;
  std::string topic;
  std::vector<std::string> users;
  std::vector<std::string> unsortable;
};

// Pairwise judgment: label +1 means u1 outranks u2, -1 the reverse.
struct PairLabel {
  std::string u1;
  std::string u2;
  std::string topic;
  int label = 1;
  std::string evaluator;  // "-" once de-duplicated across evaluators
};

// Quadratic explosion of one sorted list: exactly N(N-1)/2 labels, one per
// position pair i < j, each (users[i], users[j], +1).
std::vector<PairLabel> explode_pairs(const SortedEvaluation& ev);
std::vector<PairLabel> explode_all(const std::vector<SortedEvaluation>& evals);

// Vote tally for one unordered (pair, topic); u1 < u2 canonically.
struct PairVotes {
  std::string u1;
  std::string u2;
  std::string topic;
  int64_t up = 0;    // votes saying u1 outranks u2
  int64_t down = 0;  // votes saying u2 outranks u1
};

// Majority fraction max(up, down) / total; in [0.5, 1] for any voted pair.
double consensus_fraction(const PairVotes& v);

// Probability that two distinct votes drawn from the tally agree:
// (C(up,2) + C(down,2)) / C(total,2). At two votes this is 0 or 1, so its
// mean over pairs is the evaluator agreement rate.
double pairwise_agreement(const PairVotes& v);

// Groups labels by canonical (pair, topic), sorted by (u1, u2, topic).
std::vector<PairVotes> tally_votes(const std::vector<PairLabel>& labels);

struct ConsensusBucket {
  int64_t votes = 0;  // total votes on the pair
  int64_t pairs = 0;
  double mean_consensus = 0.0;
  double mean_agreement = 0.0;
};

// One bucket per distinct vote count >= 2, ascending.
std::vector<ConsensusBucket> consensus_by_votes(const std::vector<PairVotes>& votes);

struct ConnectivityBucket {
  int bucket = 0;  // floor(log10(max(|C1 - C2|, 1))), capped to [0, 8]
  int64_t pairs = 0;
  double mean_consensus = 0.0;
};

struct ConnectivityCurve {
  std::vector<ConnectivityBucket> buckets;
  int64_t skipped_missing = 0;  // pairs lacking a connectivity value
};

ConnectivityCurve consensus_by_connectivity_delta(
    const std::vector<PairVotes>& votes,
    const std::unordered_map<std::string, double>& connectivity_norms);

struct SplitResult {
  std::vector<PairLabel> train;
  std::vector<PairLabel> test;
  int64_t dropped_ties = 0;  // vote ties removed by majority collapse
};

// Collapses duplicate votes to one majority label per (pair, topic), drops
// ties, then splits 80/20 by a seeded hash of the canonical triple so a pair
// never straddles the split.
SplitResult split_labels(const std::vector<PairLabel>& labels, uint64_t seed);

// Evaluation file: evaluator<TAB>topic<TAB>comma-joined-users<TAB>comma-joined-unsortable.
// Empty user sets written as "-".
std::vector<SortedEvaluation> load_evaluations(const std::string& path);
void save_evaluations(const std::vector<SortedEvaluation>& evals, const std::string& path);

// Label file: evaluator<TAB>topic<TAB>u1<TAB>u2<TAB>label.
std::vector<PairLabel> load_labels(const std::string& path);
void save_labels(const std::vector<PairLabel>& labels, const std::string& path);

void save_consensus_by_votes(const std::vector<ConsensusBucket>& buckets, const std::string& path);
void save_connectivity_curve(const ConnectivityCurve& curve, const std::string& path);

struct GroundTruthStats {
  int64_t evaluations = 0;
  int64_t labels_total = 0;
  int64_t unique_triples = 0;
  double avg_list_length = 0.0;
  int64_t train_labels = 0;
  int64_t test_labels = 0;
  int64_t dropped_ties = 0;
};

void save_gt_stats(const GroundTruthStats& stats, const std::string& path);

}  // namespace topex
