#include "topex/eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "topex/normalize.hpp"
#include "topex/util.hpp"

namespace topex {

namespace {

double label_delta(int slot, const PairLabel& label, const FeatureStore& norm,
                   const ExpertiseModel* model) {
  FeatureRow delta = feature_delta(label.u1, label.u2, label.topic, norm);
  if (slot >= 0) return delta[slot];
  double sum = 0.0;
  for (size_t k = 0; k < kCatalogSize; ++k) sum += model->final_weights[k] * delta[k];
  return sum;
}

int connectivity_bucket(double c) {
  int b = static_cast<int>(std::floor(std::log10(std::max(c, 1.0))));
  return std::clamp(b, 0, kHeatmapBuckets - 1);
}

std::string metric_name(int slot) {
  return slot >= 0 ? std::string(catalog_name(slot)) : std::string("MODEL");
}

}  // namespace

FeatureMetrics evaluate_feature(int slot, const std::vector<PairLabel>& labels,
                                const FeatureStore& norm,
                                const std::vector<std::string>& corpus_users,
                                const ExpertiseModel* model) {
  FeatureMetrics m;
  m.feature = metric_name(slot);
  m.labels = static_cast<int64_t>(labels.size());
  if (labels.empty()) m.flagged = true;

  for (const auto& label : labels) {
    double delta = label_delta(slot, label, norm, model);
    if (delta == 0.0) continue;
    ++m.predicted;
    if (static_cast<double>(label.label) * delta > 0.0) ++m.correct;
  }
  if (m.predicted > 0) m.precision = static_cast<double>(m.correct) / static_cast<double>(m.predicted);
  if (m.labels > 0) m.recall = static_cast<double>(m.correct) / static_cast<double>(m.labels);
  if (m.precision + m.recall > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }

  if (!corpus_users.empty()) {
    std::set<std::string> covered;
    for (const auto& [user, topic] : norm.sorted_keys()) {
      const FeatureRow& row = *norm.row(user, topic);
      bool has = false;
      if (slot >= 0) {
        has = row[slot] != 0.0;
      } else {
        for (size_t k = 0; k < kCatalogSize; ++k) {
          if (model->final_weights[k] * row[k] > 0.0) {
            has = true;
            break;
          }
        }
      }
      if (has) covered.insert(user);
    }
    // Coverage is against the full ingested corpus, not just scored users.
    int64_t n = 0;
    for (const auto& u : corpus_users) {
      if (covered.count(u)) ++n;
    }
    m.coverage = static_cast<double>(n) / static_cast<double>(corpus_users.size());
  }
  return m;
}

std::vector<FeatureMetrics> evaluate_all(const std::vector<PairLabel>& labels,
                                         const FeatureStore& norm,
                                         const std::vector<std::string>& corpus_users,
                                         const ExpertiseModel& model) {
  std::vector<FeatureMetrics> out;
  out.reserve(kCatalogSize + 1);
  for (size_t k = 0; k < kCatalogSize; ++k) {
    out.push_back(evaluate_feature(static_cast<int>(k), labels, norm, corpus_users));
  }
  out.push_back(evaluate_feature(kModelSlot, labels, norm, corpus_users, &model));
  return out;
}

HeatmapGrid predictability_heatmap(int slot, const std::vector<PairLabel>& labels,
                                   const FeatureStore& norm,
                                   const std::unordered_map<std::string, double>& connectivity,
                                   const ExpertiseModel* model) {
  HeatmapGrid grid;
  std::array<std::array<double, kHeatmapBuckets>, kHeatmapBuckets> sums{};
  for (const auto& label : labels) {
    double delta = label_delta(slot, label, norm, model);
    if (delta == 0.0) continue;
    if (static_cast<double>(label.label) * delta <= 0.0) continue;
    auto it1 = connectivity.find(label.u1);
    auto it2 = connectivity.find(label.u2);
    if (it1 == connectivity.end() || it2 == connectivity.end()) {
      ++grid.skipped_missing;
      continue;
    }
    int b1 = connectivity_bucket(it1->second);
    int b2 = connectivity_bucket(it2->second);
    sums[b1][b2] += std::abs(delta);
    grid.count[b1][b2] += 1;
  }
  for (int i = 0; i < kHeatmapBuckets; ++i) {
    for (int j = 0; j < kHeatmapBuckets; ++j) {
      if (grid.count[i][j] > 0) {
        grid.mean_abs_delta[i][j] = sums[i][j] / static_cast<double>(grid.count[i][j]);
      }
    }
  }
  return grid;
}

void export_distributions(const FeatureStore& raw,
                          const std::unordered_map<std::string, double>& connectivity,
                          const std::vector<PairLabel>& labels, const FeatureStore& norm,
                          const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  // (a) raw value histogram per feature, decade buckets.
  {
    std::map<std::pair<int, int>, int64_t> counts;  // (slot, bucket) -> n
    for (const auto& [user, topic] : raw.sorted_keys()) {
      const FeatureRow& row = *raw.row(user, topic);
      for (size_t k = 0; k < kCatalogSize; ++k) {
        if (row[k] <= 0.0) continue;
        int bucket = static_cast<int>(std::floor(std::log10(row[k])));
        bucket = std::clamp(bucket, -12, 12);
        counts[{static_cast<int>(k), bucket}] += 1;
      }
    }
    std::ostringstream out;
    out << "# dist_feature_values\tfeature\tbucket\tcount\tdensity\n";
    for (const auto& [key, n] : counts) {
      double lo = std::pow(10.0, key.second);
      double width = lo * 9.0;  // 10^(b+1) - 10^b
      out << catalog_name(key.first) << '\t' << key.second << '\t' << n << '\t'
          << format_double(static_cast<double>(n) / width) << "\n";
    }
    write_file((fs::path(dir) / "dist_feature_values.tsv").string(), out.str());
  }

  // (b) users holding each feature, by connectivity bucket.
  {
    std::map<std::pair<int, int>, std::set<std::string>> users;  // (slot, bucket)
    for (const auto& [user, topic] : raw.sorted_keys()) {
      auto cit = connectivity.find(user);
      if (cit == connectivity.end()) continue;
      int bucket = connectivity_bucket(cit->second);
      const FeatureRow& row = *raw.row(user, topic);
      for (size_t k = 0; k < kCatalogSize; ++k) {
        if (row[k] > 0.0) users[{static_cast<int>(k), bucket}].insert(user);
      }
    }
    std::ostringstream out;
    out << "# dist_connectivity_coverage\tfeature\tbucket\tusers\n";
    for (const auto& [key, set] : users) {
      out << catalog_name(key.first) << '\t' << key.second << '\t' << set.size() << "\n";
    }
    write_file((fs::path(dir) / "dist_connectivity_coverage.tsv").string(), out.str());
  }

  // (c) labeled pairs by normalized delta, split by sign, |delta| decades.
  {
    std::map<std::tuple<int, char, int>, int64_t> counts;  // (slot, sign, bucket)
    for (const auto& label : labels) {
      FeatureRow delta = feature_delta(label.u1, label.u2, label.topic, norm);
      for (size_t k = 0; k < kCatalogSize; ++k) {
        double d = delta[k];
        if (d == 0.0) {
          counts[{static_cast<int>(k), '0', 0}] += 1;
          continue;
        }
        int bucket = static_cast<int>(std::floor(std::log10(std::abs(d))));
        bucket = std::clamp(bucket, -12, 0);
        counts[{static_cast<int>(k), d > 0 ? '+' : '-', bucket}] += 1;
      }
    }
    std::ostringstream out;
    out << "# dist_gt_delta\tfeature\tsign\tbucket\tcount\n";
    for (const auto& [key, n] : counts) {
      out << catalog_name(std::get<0>(key)) << '\t' << std::get<1>(key) << '\t'
          << std::get<2>(key) << '\t' << n << "\n";
    }
    write_file((fs::path(dir) / "dist_gt_delta.tsv").string(), out.str());
  }
}

SupertopicTable supertopic_rollup(const ExpertiseModel& model, const FeatureStore& norm,
                                  const TopicOntology& ont) {
  SupertopicTable table;
  std::vector<std::string> networks;
  for (size_t n = 0; n < kNetworkCount; ++n) {
    networks.push_back(std::string(to_string(static_cast<Network>(n))));
  }
  networks.push_back("ALL");

  // user -> super slug -> summed score, one map per network column.
  std::vector<std::map<std::string, std::map<std::string, double>>> sums(networks.size());
  for (const auto& [user, topic] : norm.sorted_keys()) {
    const FeatureRow& row = *norm.row(user, topic);
    const std::string& super_slug = ont.super_of(topic).slug;
    for (size_t n = 0; n < kNetworkCount; ++n) {
      auto [first, last] = catalog_network_span(static_cast<Network>(n));
      double s = 0.0;
      for (int k = first; k < last; ++k) s += model.final_weights[k] * row[k];
      if (s > 0.0) sums[n][user][super_slug] += s;
    }
    double total = 0.0;
    for (size_t k = 0; k < kCatalogSize; ++k) total += model.final_weights[k] * row[k];
    if (total > 0.0) sums.back()[user][super_slug] += total;
  }

  std::set<std::string> all_users;
  for (const auto& [user, topic] : norm.sorted_keys()) all_users.insert(user);

  for (size_t n = 0; n < networks.size(); ++n) {
    std::map<std::string, int64_t> top_counts;
    for (const auto& [user, supers] : sums[n]) {
      // Strongest super wins; ties go to the first slug in order.
      const std::string* best = nullptr;
      double best_score = 0.0;
      for (const auto& [slug, s] : supers) {
        if (!best || s > best_score) {
          best = &slug;
          best_score = s;
        }
      }
      if (best) top_counts[*best] += 1;
    }
    int64_t scored = 0;
    for (const auto& [slug, c] : top_counts) scored += c;
    table.excluded[networks[n]] = static_cast<int64_t>(all_users.size()) -
                                  static_cast<int64_t>(sums[n].size());
    for (const auto& [slug, c] : top_counts) {
      SupertopicRow row;
      row.network = networks[n];
      row.super_slug = slug;
      row.users = c;
      row.percent = scored > 0 ? 100.0 * static_cast<double>(c) / static_cast<double>(scored) : 0.0;
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

void save_feature_metrics(const std::vector<FeatureMetrics>& metrics, const std::string& path) {
  std::ostringstream out;
  out << "# feature_metrics\tfeature\tlabels\tpredicted\tcorrect\tprecision\trecall\tf1\tcoverage\n";
  for (const auto& m : metrics) {
    out << m.feature << '\t' << m.labels << '\t' << m.predicted << '\t' << m.correct << '\t'
        << format_double(m.precision) << '\t' << format_double(m.recall) << '\t'
        << format_double(m.f1) << '\t' << format_double(m.coverage) << "\n";
  }
  write_file(path, out.str());
}

void save_heatmaps(const std::vector<std::pair<std::string, HeatmapGrid>>& grids,
                   const std::string& path) {
  std::ostringstream out;
  out << "# heatmaps\tfeature\tb1\tb2\tmean_abs_delta\tcount\n";
  for (const auto& [name, grid] : grids) {
    for (int i = 0; i < kHeatmapBuckets; ++i) {
      for (int j = 0; j < kHeatmapBuckets; ++j) {
        if (grid.count[i][j] == 0) continue;
        out << name << '\t' << i << '\t' << j << '\t' << format_double(grid.mean_abs_delta[i][j])
            << '\t' << grid.count[i][j] << "\n";
      }
    }
  }
  write_file(path, out.str());
}

void save_supertopic_table(const SupertopicTable& table, const std::string& path) {
  std::ostringstream out;
  out << "# supertopics\tnetwork\tsuper\tusers\tpercent\n";
  for (const auto& [network, count] : table.excluded) {
    out << "# excluded\t" << network << '\t' << count << "\n";
  }
  for (const auto& row : table.rows) {
    out << row.network << '\t' << row.super_slug << '\t' << row.users << '\t'
        << format_double(row.percent) << "\n";
  }
  write_file(path, out.str());
}

}  // namespace topex
