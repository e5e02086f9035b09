#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "topex/groundtruth.hpp"
#include "topex/util.hpp"

using namespace topex;

namespace {

SortedEvaluation eval_of(const std::string& evaluator, const std::string& topic,
                         std::vector<std::string> users) {
  SortedEvaluation e;
  e.evaluator = evaluator;
  e.topic = topic;
  e.users = std::move(users);
  return e;
}

}  // namespace

TEST_CASE("pair explosion emits exactly n(n-1)/2 labels") {
  for (size_t n : {0u, 1u, 2u, 8u, 50u}) {
    std::vector<std::string> users;
    for (size_t i = 0; i < n; ++i) users.push_back("u" + std::to_string(i));
    auto labels = explode_pairs(eval_of("e1", "t1", users));
    CHECK(labels.size() == n * (n - 1) / 2);
  }
  // The average production list held ~8 users; 8 -> 28 pairs.
  std::vector<std::string> eight;
  for (int i = 0; i < 8; ++i) eight.push_back("u" + std::to_string(i));
  CHECK(explode_pairs(eval_of("e1", "t1", eight)).size() == 28);
}

TEST_CASE("explosion preserves order semantics: earlier user wins each pair") {
  auto labels = explode_pairs(eval_of("e1", "t1", {"best", "mid", "worst"}));
  REQUIRE(labels.size() == 3);
  for (const auto& l : labels) {
    CHECK(l.label == 1);
    CHECK(l.evaluator == "e1");
    CHECK(l.topic == "t1");
  }
  CHECK(labels[0].u1 == "best");
  CHECK(labels[0].u2 == "mid");
  CHECK(labels[1].u1 == "best");
  CHECK(labels[1].u2 == "worst");
  CHECK(labels[2].u1 == "mid");
  CHECK(labels[2].u2 == "worst");
}

TEST_CASE("vote tally canonicalizes pair order") {
  std::vector<PairLabel> labels;
  labels.push_back({"b", "a", "t1", 1, "e1"});   // b better than a
  labels.push_back({"a", "b", "t1", -1, "e2"});  // b better than a, other orientation
  labels.push_back({"a", "b", "t1", 1, "e3"});   // a better than b
  auto votes = tally_votes(labels);
  REQUIRE(votes.size() == 1);
  CHECK(votes[0].u1 == "a");
  CHECK(votes[0].u2 == "b");
  CHECK(votes[0].up == 1);    // a preferred once
  CHECK(votes[0].down == 2);  // b preferred twice
}

TEST_CASE("consensus and agreement formulas") {
  PairVotes v;
  v.up = 2;
  v.down = 0;
  CHECK(consensus_fraction(v) == 1.0);
  CHECK(pairwise_agreement(v) == 1.0);
  v.up = 1;
  v.down = 1;
  CHECK(consensus_fraction(v) == 0.5);
  CHECK(pairwise_agreement(v) == 0.0);
  v.up = 3;
  v.down = 1;
  // C(3,2)/C(4,2) = 3/6.
  CHECK(consensus_fraction(v) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(pairwise_agreement(v) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("consensus report buckets by vote count") {
  std::vector<PairLabel> labels;
  // Pair (a,b): two agreeing votes. Pair (c,d): two disagreeing votes.
  labels.push_back({"a", "b", "t1", 1, "e1"});
  labels.push_back({"a", "b", "t1", 1, "e2"});
  labels.push_back({"c", "d", "t1", 1, "e1"});
  labels.push_back({"c", "d", "t1", -1, "e2"});
  // Pair (e,f): a single vote, excluded from consensus buckets.
  labels.push_back({"e", "f", "t1", 1, "e1"});
  auto buckets = consensus_by_votes(tally_votes(labels));
  REQUIRE(buckets.size() == 1);
  CHECK(buckets[0].votes == 2);
  CHECK(buckets[0].pairs == 2);
  CHECK(buckets[0].mean_consensus == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(buckets[0].mean_agreement == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("connectivity curve buckets pairs by log10 delta") {
  std::vector<PairLabel> labels;
  labels.push_back({"a", "b", "t1", 1, "e1"});
  labels.push_back({"a", "b", "t1", 1, "e2"});
  labels.push_back({"c", "d", "t1", 1, "e1"});
  labels.push_back({"c", "d", "t1", -1, "e2"});
  labels.push_back({"a", "x", "t1", 1, "e1"});
  labels.push_back({"a", "x", "t1", 1, "e2"});
  std::unordered_map<std::string, double> norms{
      {"a", 5000.0}, {"b", 10.0}, {"c", 30.0}, {"d", 25.0}};
  auto curve = consensus_by_connectivity_delta(tally_votes(labels), norms);
  // (a,b): |4990| -> bucket 3; (c,d): |5| -> bucket 0; (a,x): missing x.
  CHECK(curve.skipped_missing == 1);
  REQUIRE(curve.buckets.size() == 2);
  CHECK(curve.buckets[0].bucket == 0);
  CHECK(curve.buckets[0].pairs == 1);
  CHECK(curve.buckets[0].mean_consensus == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(curve.buckets[1].bucket == 3);
  CHECK(curve.buckets[1].pairs == 1);
  CHECK(curve.buckets[1].mean_consensus == 1.0);
}

TEST_CASE("split collapses votes by majority and drops ties") {
  std::vector<PairLabel> labels;
  // 2-1 majority: kept.
  labels.push_back({"a", "b", "t1", 1, "e1"});
  labels.push_back({"a", "b", "t1", 1, "e2"});
  labels.push_back({"a", "b", "t1", -1, "e3"});
  // 1-1 tie: dropped.
  labels.push_back({"c", "d", "t1", 1, "e1"});
  labels.push_back({"c", "d", "t1", -1, "e2"});
  SplitResult split = split_labels(labels, 7);
  CHECK(split.dropped_ties == 1);
  CHECK(split.train.size() + split.test.size() == 1);
  const PairLabel& kept = split.train.empty() ? split.test[0] : split.train[0];
  CHECK(kept.u1 == "a");
  CHECK(kept.u2 == "b");
  CHECK(kept.label == 1);
  CHECK(kept.evaluator == "-");
}

TEST_CASE("split is deterministic, disjoint, and close to 80/20") {
  std::vector<PairLabel> labels;
  for (int i = 0; i < 5000; ++i) {
    labels.push_back({"u" + std::to_string(i), "v" + std::to_string(i),
                      "t" + std::to_string(i % 7), 1, "e1"});
  }
  SplitResult a = split_labels(labels, 123);
  SplitResult b = split_labels(labels, 123);
  CHECK(a.train.size() == b.train.size());
  CHECK(a.test.size() == b.test.size());
  CHECK(a.train.size() + a.test.size() == labels.size());
  double test_fraction = static_cast<double>(a.test.size()) / labels.size();
  CHECK(test_fraction > 0.17);
  CHECK(test_fraction < 0.23);

  // A different seed shuffles membership.
  SplitResult c = split_labels(labels, 124);
  bool different = a.test.size() != c.test.size();
  for (size_t i = 0; !different && i < std::min(a.test.size(), c.test.size()); ++i) {
    different = a.test[i].u1 != c.test[i].u1;
  }
  CHECK(different);

  // No triple appears on both sides.
  std::set<std::string> train_keys;
  for (const auto& l : a.train) train_keys.insert(l.u1 + "\t" + l.u2 + "\t" + l.topic);
  for (const auto& l : a.test) CHECK(train_keys.count(l.u1 + "\t" + l.u2 + "\t" + l.topic) == 0);
}

TEST_CASE("unsortable users produce no labels") {
  SortedEvaluation e = eval_of("e1", "t1", {"a", "b"});
  e.unsortable = {"weird"};
  auto labels = explode_pairs(e);
  CHECK(labels.size() == 1);
  auto all = explode_all({e, eval_of("e2", "t1", {"a", "b", "c"})});
  CHECK(all.size() == 4);
}

TEST_CASE("evaluation and label files round-trip") {
  std::string dir = (std::filesystem::temp_directory_path() / "topex_gt_test").string();
  std::filesystem::remove_all(dir);

  std::vector<SortedEvaluation> evals;
  evals.push_back(eval_of("e1", "t1", {"a", "b", "c"}));
  SortedEvaluation with_unsortable = eval_of("e2", "t2", {"x", "y"});
  with_unsortable.unsortable = {"z"};
  evals.push_back(with_unsortable);
  save_evaluations(evals, dir + "/gt.tsv");
  auto loaded = load_evaluations(dir + "/gt.tsv");
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].users == std::vector<std::string>{"a", "b", "c"});
  CHECK(loaded[0].unsortable.empty());
  CHECK(loaded[1].unsortable == std::vector<std::string>{"z"});

  auto labels = explode_all(loaded);
  save_labels(labels, dir + "/labels.tsv");
  auto back = load_labels(dir + "/labels.tsv");
  REQUIRE(back.size() == labels.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].u1 == labels[i].u1);
    CHECK(back[i].u2 == labels[i].u2);
    CHECK(back[i].topic == labels[i].topic);
    CHECK(back[i].label == labels[i].label);
    CHECK(back[i].evaluator == labels[i].evaluator);
  }

  // Duplicate users within one list are rejected.
  write_file(dir + "/dup.tsv", "e1\tt1\ta,b,a\t-\n");
  CHECK_THROWS(load_evaluations(dir + "/dup.tsv"));
  // Labels other than +-1 are rejected.
  write_file(dir + "/badlabel.tsv", "e1\tt1\ta\tb\t2\n");
  CHECK_THROWS(load_labels(dir + "/badlabel.tsv"));
  std::filesystem::remove_all(dir);
}
