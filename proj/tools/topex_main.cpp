#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "topex/catalog.hpp"
#include "topex/connectivity.hpp"
#include "topex/eval.hpp"
#include "topex/events.hpp"
#include "topex/extract.hpp"
#include "topex/feature_store.hpp"
#include "topex/groundtruth.hpp"
#include "topex/model.hpp"
#include "topex/normalize.hpp"
#include "topex/ontology.hpp"
#include "topex/rank.hpp"
#include "topex/service.hpp"
#include "topex/synth.hpp"
#include "topex/util.hpp"

namespace {

using namespace topex;

std::string artifact(const std::string& dir, const std::string& name, const std::string& stage) {
  std::string path = dir + "/" + name;
  require_file(path, name + " (produced by `topex " + stage + "`)");
  return path;
}

void save_users(const std::vector<std::string>& users, const std::string& path) {
  std::ostringstream body;
  body << "# users\n";
  for (const auto& u : users) body << u << '\n';
  write_file(path, body.str());
}

std::vector<std::string> load_users(const std::string& path) {
  std::vector<std::string> users;
  for (const auto& line : split(read_file(path, "users file"), '\n')) {
    if (line.empty() || line[0] == '#') continue;
    users.push_back(line);
  }
  return users;
}

void run_synth(const std::string& config_path, uint64_t seed, const std::string& out) {
  SynthConfig config = load_synth_config(config_path);
  SynthDataset dataset = synth_generate(config, seed);
  save_synth_dataset(dataset, out);
  std::cout << "synth: " << dataset.events.size() << " events, " << dataset.evaluations.size()
            << " evaluations, " << dataset.handles.size() << " users -> " << out << "\n";
}

void run_ingest(const std::string& in, const std::string& out) {
  ReadResult result = read_events(artifact(in, "events.jsonl", "synth"));
  write_events(result.events, out + "/events.valid.jsonl");
  {
    std::ostringstream body;
    body << "# rejects\tline\treason\n";
    for (const auto& r : result.rejects) body << r.line_no << '\t' << r.reason << '\n';
    write_file(out + "/rejects.tsv", body.str());
  }
  std::vector<std::string> users = collect_users(result.events);
  save_users(users, out + "/users.tsv");
  {
    std::ostringstream body;
    body << "# ingest_stats\n";
    body << "rejected_lines\t" << result.rejects.size() << '\n';
    body << "total_lines\t" << result.total_lines << '\n';
    body << "users\t" << users.size() << '\n';
    body << "valid_events\t" << result.events.size() << '\n';
    write_file(out + "/ingest_stats.tsv", body.str());
  }
  std::cout << "ingest: " << result.events.size() << " valid events, " << result.rejects.size()
            << " rejects, " << users.size() << " users\n";
}

void run_extract(const std::string& in, const std::string& out, int window_days, int64_t as_of) {
  std::vector<EventRecord> events = read_valid_events(artifact(in, "events.valid.jsonl", "ingest"));
  TopicOntology ont = load_ontology(artifact(in, "ontology.tsv", "synth"));
  PhraseDictionary dict = load_dictionary(artifact(in, "dictionary.tsv", "synth"));
  dict.validate(ont);
  ExtractOptions options;
  options.window_days = window_days;
  options.as_of = as_of;
  ExtractStats stats;
  FeatureStore store = extract_features(events, ont, dict, options, &stats);
  save_feature_store(store, out + "/features.tsv");
  save_extract_stats(stats, out + "/extract_stats.tsv");
  std::cout << "extract: " << stats.events_in_window << "/" << stats.events_total
            << " events in window, " << stats.store_rows << " rows, " << stats.store_users
            << " users\n";
}

void run_normalize(const std::string& in, const std::string& out) {
  FeatureStore raw = load_feature_store(artifact(in, "features.tsv", "extract"));
  FeatureStore norm = normalize_store(raw);
  save_feature_store(norm, out + "/features.norm.tsv");
  std::cout << "normalize: " << norm.row_count() << " rows\n";
}

void run_explode(const std::string& in, const std::string& out, uint64_t seed) {
  std::vector<SortedEvaluation> evals = load_evaluations(artifact(in, "groundtruth.tsv", "synth"));
  ConnectivityTable table = load_connectivity(artifact(in, "connectivity.tsv", "synth"));
  std::vector<PairLabel> labels = explode_all(evals);
  save_labels(labels, out + "/labels.all.tsv");

  std::vector<PairVotes> votes = tally_votes(labels);
  save_consensus_by_votes(consensus_by_votes(votes), out + "/consensus_by_votes.tsv");
  auto norms = connectivity_norms(table);
  save_connectivity_curve(consensus_by_connectivity_delta(votes, norms),
                          out + "/consensus_by_connectivity.tsv");

  SplitResult split = split_labels(labels, seed);
  save_labels(split.train, out + "/labels.train.tsv");
  save_labels(split.test, out + "/labels.test.tsv");

  GroundTruthStats stats;
  stats.evaluations = evals.size();
  stats.labels_total = labels.size();
  stats.unique_triples = votes.size();
  double total_users = 0;
  for (const auto& e : evals) total_users += e.users.size();
  stats.avg_list_length = evals.empty() ? 0.0 : total_users / evals.size();
  stats.train_labels = split.train.size();
  stats.test_labels = split.test.size();
  stats.dropped_ties = split.dropped_ties;
  save_gt_stats(stats, out + "/gt_stats.tsv");
  std::cout << "explode-gt: " << labels.size() << " labels from " << evals.size()
            << " evaluations; train " << split.train.size() << ", test " << split.test.size()
            << ", ties dropped " << split.dropped_ties << "\n";
}

void run_train(const std::string& in, const std::string& out, uint64_t seed) {
  FeatureStore norm = load_feature_store(artifact(in, "features.norm.tsv", "normalize"));
  std::vector<PairLabel> labels = load_labels(artifact(in, "labels.train.tsv", "explode-gt"));
  ExpertiseModel model = train(labels, norm, seed);
  save_model(model, out + "/model.tsv");
  std::cout << "train: " << labels.size() << " labels";
  for (size_t n = 0; n < kNetworkCount; ++n) {
    std::cout << " " << to_string(static_cast<Network>(n)) << "=" << format_double(model.global[n]);
  }
  std::cout << (model.degenerate ? " (degenerate)" : "") << "\n";
}

void run_score(const std::string& in, const std::string& out) {
  ExpertiseModel model = load_model(artifact(in, "model.tsv", "train"));
  FeatureStore norm = load_feature_store(artifact(in, "features.norm.tsv", "normalize"));
  std::vector<ScoreRow> scores = score_all(model, norm);
  save_scores(scores, out + "/scores.tsv");
  std::cout << "score: " << scores.size() << " positive scores\n";
}

void run_index(const std::string& in, const std::string& out) {
  std::vector<ScoreRow> scores = load_scores(artifact(in, "scores.tsv", "score"));
  TopicOntology ont = load_ontology(artifact(in, "ontology.tsv", "synth"));
  std::map<std::string, std::string> handles = load_handles(artifact(in, "handles.tsv", "synth"));
  RankedIndex index = RankedIndex::build(scores, ont, handles);
  index.save(out + "/index");
  std::cout << "index: " << scores.size() << " scores -> " << out << "/index\n";
}

void run_eval(const std::string& in, const std::string& out) {
  std::vector<PairLabel> labels = load_labels(artifact(in, "labels.test.tsv", "explode-gt"));
  FeatureStore norm = load_feature_store(artifact(in, "features.norm.tsv", "normalize"));
  FeatureStore raw = load_feature_store(artifact(in, "features.tsv", "extract"));
  ExpertiseModel model = load_model(artifact(in, "model.tsv", "train"));
  ConnectivityTable table = load_connectivity(artifact(in, "connectivity.tsv", "synth"));
  std::vector<std::string> corpus = load_users(artifact(in, "users.tsv", "ingest"));
  TopicOntology ont = load_ontology(artifact(in, "ontology.tsv", "synth"));

  std::vector<FeatureMetrics> metrics = evaluate_all(labels, norm, corpus, model);
  save_feature_metrics(metrics, out + "/feature_metrics.tsv");

  auto norms = connectivity_norms(table);
  std::vector<std::pair<std::string, HeatmapGrid>> grids;
  grids.push_back({"MODEL", predictability_heatmap(kModelSlot, labels, norm, norms, &model)});
  for (size_t slot = 0; slot < kCatalogSize; ++slot) {
    HeatmapGrid grid = predictability_heatmap(static_cast<int>(slot), labels, norm, norms);
    bool any = false;
    for (const auto& row : grid.count) {
      for (int64_t c : row) any = any || c > 0;
    }
    if (any) grids.push_back({std::string(catalog_name(slot)), grid});
  }
  save_heatmaps(grids, out + "/heatmap_predictability.tsv");

  save_supertopic_table(supertopic_rollup(model, norm, ont), out + "/supertopics.tsv");
  export_distributions(raw, norms, labels, norm, out);

  const FeatureMetrics& m = metrics.back();
  std::cout << "eval: MODEL precision " << format_double(m.precision) << ", recall "
            << format_double(m.recall) << ", f1 " << format_double(m.f1) << ", coverage "
            << format_double(m.coverage) << " over " << m.labels << " test labels\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topex: topical expertise scoring pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::string in_dir = ".";
  std::string out_dir;
  uint64_t seed = 42;
  int window_days = 90;
  int64_t as_of = 0;
  ServiceOptions service;

  auto add_in = [&](CLI::App* cmd) { cmd->add_option("--in", in_dir, "input artifact directory"); };
  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "output directory (default: --in)");
  };
  auto add_seed = [&](CLI::App* cmd) { cmd->add_option("--seed", seed, "random seed"); };

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset with planted truth");
  synth->add_option("--config", config_path, "generator config JSON");
  add_seed(synth);
  add_out(synth);
  synth->callback([&] { run_synth(config_path, seed, out_dir.empty() ? in_dir : out_dir); });

  CLI::App* ingest = app.add_subcommand("ingest", "validate raw events, split off rejects");
  add_in(ingest);
  add_out(ingest);
  ingest->callback([&] { run_ingest(in_dir, out_dir.empty() ? in_dir : out_dir); });

  CLI::App* extract = app.add_subcommand("extract", "aggregate events into raw topic features");
  add_in(extract);
  add_out(extract);
  extract->add_option("--window-days", window_days, "event window length in days");
  extract->add_option("--as-of", as_of, "window end timestamp (0: latest event)");
  extract->callback([&] { run_extract(in_dir, out_dir.empty() ? in_dir : out_dir, window_days, as_of); });

  CLI::App* normalize = app.add_subcommand("normalize", "log-scale features into [0, 1]");
  add_in(normalize);
  add_out(normalize);
  normalize->callback([&] { run_normalize(in_dir, out_dir.empty() ? in_dir : out_dir); });

  CLI::App* explode = app.add_subcommand("explode-gt", "explode evaluations into pairwise labels");
  add_in(explode);
  add_out(explode);
  add_seed(explode);
  explode->callback([&] { run_explode(in_dir, out_dir.empty() ? in_dir : out_dir, seed); });

  CLI::App* train_cmd = app.add_subcommand("train", "fit per-network and global weights");
  add_in(train_cmd);
  add_out(train_cmd);
  add_seed(train_cmd);
  train_cmd->callback([&] { run_train(in_dir, out_dir.empty() ? in_dir : out_dir, seed); });

  CLI::App* score = app.add_subcommand("score", "score every (user, topic) row");
  add_in(score);
  add_out(score);
  score->callback([&] { run_score(in_dir, out_dir.empty() ? in_dir : out_dir); });

  CLI::App* index = app.add_subcommand("index", "build the ranked percentile index");
  add_in(index);
  add_out(index);
  index->callback([&] { run_index(in_dir, out_dir.empty() ? in_dir : out_dir); });

  CLI::App* eval = app.add_subcommand("eval", "report metrics against held-out labels");
  add_in(eval);
  add_out(eval);
  eval->callback([&] { run_eval(in_dir, out_dir.empty() ? in_dir : out_dir); });

  CLI::App* serve = app.add_subcommand("serve", "serve the expert API over an index");
  serve->add_option("--index", service.index_dir, "index directory")->required();
  serve->add_option("--host", service.host, "listen address");
  serve->add_option("--port", service.port, "listen port");
  serve->callback([&] { std::exit(run_service(service)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const MissingArtifactError& e) {
    std::cerr << "topex: missing artifact: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "topex: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
