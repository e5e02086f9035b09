#include "topex/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "topex/normalize.hpp"
#include "topex/util.hpp"

namespace topex {

namespace {

Network network_by_ordinal(size_t i) { return static_cast<Network>(i); }

std::vector<PairLabel> sorted_labels(const std::vector<PairLabel>& labels) {
  std::vector<PairLabel> out = labels;
  std::sort(out.begin(), out.end(), [](const PairLabel& a, const PairLabel& b) {
    return std::tie(a.topic, a.u1, a.u2, a.label, a.evaluator) <
           std::tie(b.topic, b.u1, b.u2, b.label, b.evaluator);
  });
  return out;
}

double span_dot(const std::vector<double>& weights, const FeatureRow& delta, int first) {
  double sum = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) sum += weights[i] * delta[first + static_cast<int>(i)];
  return sum;
}

}  // namespace

NetworkModel train_network_model(Network network, const std::vector<PairLabel>& train,
                                 const FeatureStore& norm) {
  auto [first, last] = catalog_network_span(network);
  size_t width = static_cast<size_t>(last - first);
  NetworkModel model;
  model.network = network;
  model.weights.assign(width, 0.0);

  std::vector<double> rows;
  std::vector<double> targets;
  for (const auto& label : train) {
    FeatureRow delta = feature_delta(label.u1, label.u2, label.topic, norm);
    bool usable = false;
    for (size_t i = 0; i < width; ++i) {
      if (delta[first + static_cast<int>(i)] != 0.0) {
        usable = true;
        break;
      }
    }
    if (!usable) continue;
    for (size_t i = 0; i < width; ++i) rows.push_back(delta[first + static_cast<int>(i)]);
    targets.push_back(static_cast<double>(label.label));
  }

  if (targets.empty()) {
    model.degenerate = true;
    return model;
  }
  Matrix a(targets.size(), width);
  a.data = std::move(rows);
  NnlsResult result = solve_nnls(a, targets);
  model.weights = result.weights;
  // Unit weight mass per network puts every network score on the same scale,
  // so the global coefficients are comparable measures of network importance
  // (an uninformative network otherwise gets near-zero weights and the global
  // fit inflates the coefficient on that shrunken column).
  double mass = 0.0;
  for (double w : model.weights) mass += w;
  if (mass > 0.0) {
    for (double& w : model.weights) w /= mass;
  } else {
    model.degenerate = true;
  }
  return model;
}

std::array<double, kNetworkCount> train_global_model(
    const std::vector<PairLabel>& train, const std::array<NetworkModel, kNetworkCount>& models,
    const FeatureStore& norm) {
  std::vector<double> rows;
  std::vector<double> targets;
  for (const auto& label : train) {
    FeatureRow delta = feature_delta(label.u1, label.u2, label.topic, norm);
    std::array<double, kNetworkCount> net_scores{};
    bool usable = false;
    for (size_t n = 0; n < kNetworkCount; ++n) {
      auto [first, last] = catalog_network_span(network_by_ordinal(n));
      (void)last;
      net_scores[n] = span_dot(models[n].weights, delta, first);
      if (net_scores[n] != 0.0) usable = true;
    }
    if (!usable) continue;
    for (double v : net_scores) rows.push_back(v);
    targets.push_back(static_cast<double>(label.label));
  }

  std::array<double, kNetworkCount> g{};
  if (targets.empty()) return g;
  Matrix a(targets.size(), kNetworkCount);
  a.data = std::move(rows);
  NnlsResult result = solve_nnls(a, targets);
  for (size_t n = 0; n < kNetworkCount; ++n) g[n] = result.weights[n];
  return g;
}

ExpertiseModel finalize_weights(const std::array<NetworkModel, kNetworkCount>& models,
                                const std::array<double, kNetworkCount>& global, uint64_t seed) {
  ExpertiseModel model;
  model.networks = models;
  model.global = global;
  model.seed = seed;
  model.final_weights.fill(0.0);
  bool any = false;
  for (size_t n = 0; n < kNetworkCount; ++n) {
    auto [first, last] = catalog_network_span(network_by_ordinal(n));
    for (int k = first; k < last; ++k) {
      double w = models[n].weights.empty() ? 0.0 : models[n].weights[k - first];
      model.final_weights[k] = w * global[n];
      if (model.final_weights[k] > 0.0) any = true;
    }
  }
  model.degenerate = !any;
  return model;
}

ExpertiseModel train(const std::vector<PairLabel>& train_labels, const FeatureStore& norm,
                     uint64_t seed) {
  std::vector<PairLabel> labels = sorted_labels(train_labels);
  // Stacked fit: the network models and the global combiner see disjoint
  // halves, otherwise the combiner rewards whatever noise the network fits
  // latched onto in-sample and uninformative networks keep nonzero weight.
  std::vector<PairLabel> first_half;
  std::vector<PairLabel> second_half;
  for (const auto& label : labels) {
    uint64_t h = fnv1a64(label.u1 + '\t' + label.u2 + '\t' + label.topic);
    h = fnv1a64_mix(h, seed ^ 0x9E3779B97F4A7C15ULL);
    (h % 2 == 0 ? first_half : second_half).push_back(label);
  }
  if (first_half.empty() || second_half.empty()) {
    first_half = labels;
    second_half = labels;
  }
  std::array<NetworkModel, kNetworkCount> models;
  for (size_t n = 0; n < kNetworkCount; ++n) {
    models[n] = train_network_model(network_by_ordinal(n), first_half, norm);
  }
  auto global = train_global_model(second_half, models, norm);
  return finalize_weights(models, global, seed);
}

double score(const std::string& user, const std::string& topic, const ExpertiseModel& model,
             const FeatureStore& norm) {
  const FeatureRow* row = norm.row(user, topic);
  if (!row) return 0.0;
  double sum = 0.0;
  for (size_t k = 0; k < kCatalogSize; ++k) sum += model.final_weights[k] * (*row)[k];
  return sum;
}

namespace {

std::vector<ScoreRow> score_all_common(const ExpertiseModel& model, const FeatureStore& norm,
                                       bool parallel) {
  auto keys = norm.sorted_keys();
  std::vector<double> values(keys.size(), 0.0);
  auto compute = [&](size_t i) {
    const FeatureRow& row = *norm.row(keys[i].first, keys[i].second);
    double sum = 0.0;
    for (size_t k = 0; k < kCatalogSize; ++k) sum += model.final_weights[k] * row[k];
    values[i] = sum;
  };
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (size_t i = 0; i < keys.size(); ++i) compute(i);
  } else {
    for (size_t i = 0; i < keys.size(); ++i) compute(i);
  }
  std::vector<ScoreRow> out;
  for (size_t i = 0; i < keys.size(); ++i) {
    if (values[i] > 0.0) out.push_back({keys[i].first, keys[i].second, values[i]});
  }
  return out;
}

}  // namespace

std::vector<ScoreRow> score_all(const ExpertiseModel& model, const FeatureStore& norm) {
  return score_all_common(model, norm, true);
}

namespace ref {
std::vector<ScoreRow> score_all(const ExpertiseModel& model, const FeatureStore& norm) {
  return score_all_common(model, norm, false);
}
}  // namespace ref

void save_model(const ExpertiseModel& model, const std::string& path) {
  std::ostringstream out;
  char fingerprint[32];
  std::snprintf(fingerprint, sizeof(fingerprint), "%016llx",
                static_cast<unsigned long long>(catalog_fingerprint()));
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  out << "# topex-model\tcatalog=" << fingerprint << "\tseed=" << model.seed
      << "\tcreated=" << (epoch && *epoch ? epoch : "-") << "\n";
  for (size_t k = 0; k < kCatalogSize; ++k) {
    out << "W\t" << catalog_name(static_cast<int>(k)) << '\t'
        << format_double(model.final_weights[k]) << "\n";
  }
  for (size_t n = 0; n < kNetworkCount; ++n) {
    out << "G\t" << to_string(network_by_ordinal(n)) << '\t' << format_double(model.global[n])
        << "\n";
  }
  write_file(path, out.str());
}

ExpertiseModel load_model(const std::string& path) {
  require_file(path, "model file");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ExpertiseModel model;
  model.final_weights.fill(0.0);
  std::string line;
  size_t line_no = 0;
  bool saw_header = false;
  size_t w_lines = 0;
  size_t g_lines = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto fields = split(line, '\t');
      for (const auto& f : fields) {
        if (f.rfind("catalog=", 0) == 0) {
          char expected[32];
          std::snprintf(expected, sizeof(expected), "%016llx",
                        static_cast<unsigned long long>(catalog_fingerprint()));
          if (f.substr(8) != expected) {
            throw std::runtime_error(path + ": model catalog fingerprint " + f.substr(8) +
                                     " does not match this registry (" + expected + ")");
          }
          saw_header = true;
        } else if (f.rfind("seed=", 0) == 0) {
          model.seed = static_cast<uint64_t>(parse_int(f.substr(5), path + " seed"));
        }
      }
      continue;
    }
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected 3 fields");
    }
    if (fields[0] == "W") {
      int slot = catalog_index(fields[1]);
      if (slot < 0) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": unknown feature " +
                                 fields[1]);
      }
      model.final_weights[slot] = parse_double(fields[2], path + " line " + std::to_string(line_no));
      ++w_lines;
    } else if (fields[0] == "G") {
      auto net = network_from_string(fields[1]);
      if (!net) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": unknown network " +
                                 fields[1]);
      }
      model.global[static_cast<size_t>(*net)] =
          parse_double(fields[2], path + " line " + std::to_string(line_no));
      ++g_lines;
    } else {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": unknown record " +
                               fields[0]);
    }
  }
  if (!saw_header) throw std::runtime_error(path + ": missing model header with catalog fingerprint");
  if (w_lines != kCatalogSize || g_lines != kNetworkCount) {
    throw std::runtime_error(path + ": incomplete model (" + std::to_string(w_lines) + " W lines, " +
                             std::to_string(g_lines) + " G lines)");
  }
  bool any = false;
  for (double w : model.final_weights) {
    if (w > 0.0) any = true;
  }
  model.degenerate = !any;
  return model;
}

void save_scores(const std::vector<ScoreRow>& scores, const std::string& path) {
  std::ostringstream out;
  out << "# scores\tuser\ttopic\tscore\n";
  for (const auto& row : scores) {
    out << row.user << '\t' << row.topic << '\t' << format_double(row.score) << "\n";
  }
  write_file(path, out.str());
}

std::vector<ScoreRow> load_scores(const std::string& path) {
  require_file(path, "scores file");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<ScoreRow> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected 3 fields");
    }
    double value = parse_double(fields[2], path + " line " + std::to_string(line_no));
    out.push_back({fields[0], fields[1], value});
  }
  return out;
}

}  // namespace topex
