#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "topex/extract.hpp"
#include "topex/feature_store.hpp"
#include "topex/model.hpp"
#include "topex/normalize.hpp"
#include "topex/synth.hpp"

using namespace topex;

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  auto d = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double, std::milli>(d).count();
}

template <typename F>
double best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto start = std::chrono::steady_clock::now();
    fn();
    double t = ms_since(start);
    if (t < best) best = t;
  }
  return best;
}

bool same_store(const FeatureStore& a, const FeatureStore& b) {
  if (a.row_count() != b.row_count()) return false;
  for (const auto& [user, topic] : a.sorted_keys()) {
    const FeatureRow* ra = a.row(user, topic);
    const FeatureRow* rb = b.row(user, topic);
    if (!rb) return false;
    for (size_t i = 0; i < kCatalogSize; ++i) {
      if ((*ra)[i] != (*rb)[i]) return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topex benchmarks: serial reference vs parallel kernels"};
  int users = 1500;
  int topics = 12;
  int reps = 3;
  uint64_t seed = 7;
  app.add_option("--users", users, "synthetic user count");
  app.add_option("--topics", topics, "synthetic topic count");
  app.add_option("--reps", reps, "repetitions per kernel (best time wins)");
  app.add_option("--seed", seed, "dataset seed");
  CLI11_PARSE(app, argc, argv);

  SynthConfig config;
  config.signal = load_synth_config("").signal;
  config.users = users;
  config.topics = topics;
  config.supers = 3;
  config.evaluations = users / 2;
  std::printf("dataset: users=%d topics=%d seed=%llu\n", users, topics,
              static_cast<unsigned long long>(seed));
  SynthDataset dataset = synth_generate(config, seed);
  std::printf("events: %zu\n\n", dataset.events.size());

  PhraseDictionary dict;
  for (const auto& [phrase, entry] : dataset.dictionary) {
    dict.add(phrase, entry.first, entry.second);
  }
  ExtractOptions options;

  FeatureStore raw_ref;
  FeatureStore raw_par;
  double t_extract_ref = best_of(reps, [&] {
    raw_ref = ref::extract_features(dataset.events, dataset.ontology, dict, options);
  });
  double t_extract_par = best_of(reps, [&] {
    raw_par = extract_features(dataset.events, dataset.ontology, dict, options);
  });
  bool ok_extract = same_store(raw_ref, raw_par);

  FeatureStore norm_ref;
  FeatureStore norm_par;
  double t_norm_ref = best_of(reps, [&] { norm_ref = ref::normalize_store(raw_ref); });
  double t_norm_par = best_of(reps, [&] { norm_par = normalize_store(raw_ref); });
  bool ok_norm = same_store(norm_ref, norm_par);

  std::vector<PairLabel> labels = explode_all(dataset.evaluations);
  SplitResult split = split_labels(labels, seed);
  ExpertiseModel model = train(split.train, norm_ref, seed);

  std::vector<ScoreRow> scores_ref;
  std::vector<ScoreRow> scores_par;
  double t_score_ref = best_of(reps, [&] { scores_ref = ref::score_all(model, norm_ref); });
  double t_score_par = best_of(reps, [&] { scores_par = score_all(model, norm_ref); });
  bool ok_score = scores_ref.size() == scores_par.size();
  for (size_t i = 0; ok_score && i < scores_ref.size(); ++i) {
    ok_score = scores_ref[i].user == scores_par[i].user &&
               scores_ref[i].topic == scores_par[i].topic &&
               scores_ref[i].score == scores_par[i].score;
  }

  std::printf("%-12s %12s %12s %9s %8s\n", "kernel", "serial (ms)", "openmp (ms)", "speedup",
              "match");
  auto row = [](const char* name, double ref_ms, double par_ms, bool ok) {
    std::printf("%-12s %12.2f %12.2f %8.2fx %8s\n", name, ref_ms, par_ms,
                par_ms > 0 ? ref_ms / par_ms : 0.0, ok ? "exact" : "MISMATCH");
  };
  row("extract", t_extract_ref, t_extract_par, ok_extract);
  row("normalize", t_norm_ref, t_norm_par, ok_norm);
  row("score", t_score_ref, t_score_par, ok_score);

  return ok_extract && ok_norm && ok_score ? 0 : 1;
}
