#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "topex/connectivity.hpp"
#include "topex/events.hpp"
#include "topex/groundtruth.hpp"
#include "topex/ontology.hpp"

namespace topex {

// Deterministic random source: a standardized engine plus hand-rolled
// transforms, so identical seeds give identical streams on any platform
// (the standard library's distribution objects are implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64();
  double u01();                      // [0, 1)
  double normal();                   // Box-Muller, one value per call
  double exponential(double mean);
  int64_t poisson(double lambda);    // inversion; fine for the rates used here
  double pareto(double minimum, double alpha);  // pdf ~ x^-alpha, x >= minimum
  size_t uniform_index(size_t n);    // [0, n)

 private:
  uint64_t state_;
  uint64_t splitmix();
};

struct SynthConfig {
  int users = 500;
  int topics = 8;             // sub-level topics
  int supers = 3;
  int evaluations = 240;
  double duplicate_fraction = 0.5;  // evaluations ranked by a second evaluator
  int list_length = 8;
  int evaluators = 40;
  double disagreement = 0.16;       // planted pairwise evaluator disagreement
  double connectivity_exponent = 2.0;
  double topics_per_user = 1.5;     // poisson mean on top of 1
  double activity_scale = 1.0;
  int64_t base_ts = 1400000000;
  int window_days = 90;
  std::map<std::string, double> signal;  // per network, 0..1; defaults filled

  void validate() const;  // throws std::runtime_error naming the bad field
};

// Reads a JSON object holding any subset of the fields above; missing fields
// keep their defaults. An empty path returns the defaults.
SynthConfig load_synth_config(const std::string& path);

struct SynthDataset {
  TopicOntology ontology;
  std::vector<std::pair<std::string, std::pair<std::string, double>>> dictionary;  // phrase, (topic, w)
  std::vector<EventRecord> events;
  std::vector<SortedEvaluation> evaluations;
  ConnectivityTable connectivity;
  std::map<std::string, std::string> handles;
  std::map<std::pair<std::string, std::string>, double> latent;  // (user, topic) -> expertise
  double calibrated_sigma = 0.0;  // rank-noise magnitude matching disagreement
};

// Fully deterministic for a (config, seed) pair.
SynthDataset synth_generate(const SynthConfig& config, uint64_t seed);

// Writes events.jsonl, groundtruth.tsv, connectivity.tsv, handles.tsv,
// ontology.tsv, dictionary.tsv, latent.tsv under dir.
void save_synth_dataset(const SynthDataset& dataset, const std::string& dir);

// Standalone connectivity sampler (the power-law tail under test).
ConnectivityTable synth_connectivity(const SynthConfig& config, Rng& rng);

// Pure vote generator: n pairs, two votes each, each vote independently
// matching a planted ground truth with the fidelity that makes two voters
// agree with probability `agreement`.
std::vector<PairLabel> synth_votes(size_t pairs, double agreement, Rng& rng);

// Expected pairwise disagreement of two rankers whose keys are true position
// plus N(0, sigma), averaged over all position pairs of a length-n list.
double expected_list_disagreement(double sigma, int n);

// Smallest sigma whose expected disagreement over the given list lengths
// matches the target; 0 when the target is 0.
double calibrate_sigma(const std::vector<int>& lengths, double target);

}  // namespace topex
