#include "topex/groundtruth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "topex/util.hpp"

namespace topex {

std::vector<PairLabel> explode_pairs(const SortedEvaluation& ev) {
  std::vector<PairLabel> out;
  size_t n = ev.users.size();
  if (n < 2) return out;
  out.reserve(n * (n - 1) / 2);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      out.push_back({ev.users[i], ev.users[j], ev.topic, +1, ev.evaluator});
    }
  }
  return out;
}

std::vector<PairLabel> explode_all(const std::vector<SortedEvaluation>& evals) {
  std::vector<PairLabel> out;
  for (const auto& ev : evals) {
    auto labels = explode_pairs(ev);
    out.insert(out.end(), labels.begin(), labels.end());
  }
  return out;
}

double consensus_fraction(const PairVotes& v) {
  int64_t total = v.up + v.down;
  if (total <= 0) return 0.0;
  return static_cast<double>(std::max(v.up, v.down)) / static_cast<double>(total);
}

double pairwise_agreement(const PairVotes& v) {
  int64_t total = v.up + v.down;
  if (total < 2) return 0.0;
  auto choose2 = [](int64_t n) { return static_cast<double>(n) * static_cast<double>(n - 1) / 2.0; };
  return (choose2(v.up) + choose2(v.down)) / choose2(total);
}

std::vector<PairVotes> tally_votes(const std::vector<PairLabel>& labels) {
  std::map<std::tuple<std::string, std::string, std::string>, PairVotes> tally;
  for (const auto& l : labels) {
    bool ordered = l.u1 < l.u2;
    const std::string& a = ordered ? l.u1 : l.u2;
    const std::string& b = ordered ? l.u2 : l.u1;
    auto [it, inserted] = tally.try_emplace({a, b, l.topic});
    PairVotes& v = it->second;
    if (inserted) {
      v.u1 = a;
      v.u2 = b;
      v.topic = l.topic;
    }
    // label +1 with the pair already ordered means "u1 outranks u2".
    bool up = (l.label > 0) == ordered;
    (up ? v.up : v.down) += 1;
  }
  std::vector<PairVotes> out;
  out.reserve(tally.size());
  for (auto& [key, v] : tally) out.push_back(std::move(v));
  return out;
}

std::vector<ConsensusBucket> consensus_by_votes(const std::vector<PairVotes>& votes) {
  std::map<int64_t, ConsensusBucket> buckets;
  for (const auto& v : votes) {
    int64_t total = v.up + v.down;
    if (total < 2) continue;
    ConsensusBucket& b = buckets[total];
    b.votes = total;
    b.pairs += 1;
    b.mean_consensus += consensus_fraction(v);
    b.mean_agreement += pairwise_agreement(v);
  }
  std::vector<ConsensusBucket> out;
  out.reserve(buckets.size());
  for (auto& [total, b] : buckets) {
    b.mean_consensus /= static_cast<double>(b.pairs);
    b.mean_agreement /= static_cast<double>(b.pairs);
    out.push_back(b);
  }
  return out;
}

ConnectivityCurve consensus_by_connectivity_delta(
    const std::vector<PairVotes>& votes,
    const std::unordered_map<std::string, double>& connectivity_norms) {
  ConnectivityCurve curve;
  std::map<int, ConnectivityBucket> buckets;
  for (const auto& v : votes) {
    if (v.up + v.down < 2) continue;
    auto it1 = connectivity_norms.find(v.u1);
    auto it2 = connectivity_norms.find(v.u2);
    if (it1 == connectivity_norms.end() || it2 == connectivity_norms.end()) {
      ++curve.skipped_missing;
      continue;
    }
    double delta = std::abs(it1->second - it2->second);
    int bucket = static_cast<int>(std::floor(std::log10(std::max(delta, 1.0))));
    bucket = std::clamp(bucket, 0, 8);
    ConnectivityBucket& b = buckets[bucket];
    b.bucket = bucket;
    b.pairs += 1;
    b.mean_consensus += consensus_fraction(v);
  }
  for (auto& [bucket, b] : buckets) {
    b.mean_consensus /= static_cast<double>(b.pairs);
    curve.buckets.push_back(b);
  }
  return curve;
}

SplitResult split_labels(const std::vector<PairLabel>& labels, uint64_t seed) {
  SplitResult result;
  auto votes = tally_votes(labels);
  for (const auto& v : votes) {
    if (v.up == v.down) {
      ++result.dropped_ties;
      continue;
    }
    PairLabel label;
    label.u1 = v.u1;
    label.u2 = v.u2;
    label.topic = v.topic;
    label.label = v.up > v.down ? +1 : -1;
    label.evaluator = "-";
    uint64_t h = fnv1a64(v.u1 + '\t' + v.u2 + '\t' + v.topic);
    h = fnv1a64_mix(h, seed);
    (h % 5 == 0 ? result.test : result.train).push_back(std::move(label));
  }
  return result;
}

std::vector<SortedEvaluation> load_evaluations(const std::string& path) {
  require_file(path, "ground truth evaluations file");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<SortedEvaluation> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected 4 fields");
    }
    SortedEvaluation ev;
    ev.evaluator = fields[0];
    ev.topic = fields[1];
    if (fields[2] != "-" && !fields[2].empty()) ev.users = split(fields[2], ',');
    if (fields[3] != "-" && !fields[3].empty()) ev.unsortable = split(fields[3], ',');
    std::set<std::string> seen(ev.users.begin(), ev.users.end());
    if (seen.size() != ev.users.size()) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": duplicate user in list");
    }
    for (const auto& u : ev.unsortable) {
      if (seen.count(u)) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": user " + u + " both sorted and unsortable");
      }
    }
    out.push_back(std::move(ev));
  }
  return out;
}

void save_evaluations(const std::vector<SortedEvaluation>& evals, const std::string& path) {
  std::ostringstream out;
  out << "# evaluations\tevaluator\ttopic\tsorted_users\tunsortable\n";
  for (const auto& ev : evals) {
    out << ev.evaluator << '\t' << ev.topic << '\t'
        << (ev.users.empty() ? "-" : join(ev.users, ',')) << '\t'
        << (ev.unsortable.empty() ? "-" : join(ev.unsortable, ',')) << "\n";
  }
  write_file(path, out.str());
}

std::vector<PairLabel> load_labels(const std::string& path) {
  require_file(path, "pair labels file");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<PairLabel> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 5) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected 5 fields");
    }
    PairLabel l;
    l.evaluator = fields[0];
    l.topic = fields[1];
    l.u1 = fields[2];
    l.u2 = fields[3];
    int64_t v = parse_int(fields[4], path + " line " + std::to_string(line_no));
    if (v != 1 && v != -1) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": label must be 1 or -1");
    }
    l.label = static_cast<int>(v);
    if (l.u1 == l.u2) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": self pair");
    }
    out.push_back(std::move(l));
  }
  return out;
}

void save_labels(const std::vector<PairLabel>& labels, const std::string& path) {
  std::ostringstream out;
  out << "# labels\tevaluator\ttopic\tu1\tu2\tlabel\n";
  for (const auto& l : labels) {
    out << l.evaluator << '\t' << l.topic << '\t' << l.u1 << '\t' << l.u2 << '\t' << l.label << "\n";
  }
  write_file(path, out.str());
}

void save_consensus_by_votes(const std::vector<ConsensusBucket>& buckets, const std::string& path) {
  std::ostringstream out;
  out << "# consensus_by_votes\tvotes\tpairs\tmean_consensus\tmean_agreement\n";
  for (const auto& b : buckets) {
    out << b.votes << '\t' << b.pairs << '\t' << format_double(b.mean_consensus) << '\t'
        << format_double(b.mean_agreement) << "\n";
  }
  write_file(path, out.str());
}

void save_connectivity_curve(const ConnectivityCurve& curve, const std::string& path) {
  std::ostringstream out;
  out << "# consensus_by_connectivity\tskipped_missing=" << curve.skipped_missing << "\n";
  out << "# bucket\tpairs\tmean_consensus\n";
  for (const auto& b : curve.buckets) {
    out << b.bucket << '\t' << b.pairs << '\t' << format_double(b.mean_consensus) << "\n";
  }
  write_file(path, out.str());
}

void save_gt_stats(const GroundTruthStats& stats, const std::string& path) {
  std::ostringstream out;
  out << "# gt_stats\n";
  out << "avg_list_length\t" << format_double(stats.avg_list_length) << "\n";
  out << "dropped_ties\t" << stats.dropped_ties << "\n";
  out << "evaluations\t" << stats.evaluations << "\n";
  out << "labels_total\t" << stats.labels_total << "\n";
  out << "test_labels\t" << stats.test_labels << "\n";
  out << "train_labels\t" << stats.train_labels << "\n";
  out << "unique_triples\t" << stats.unique_triples << "\n";
  write_file(path, out.str());
}

}  // namespace topex
