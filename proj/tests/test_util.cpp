#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "doctest.h"
#include "topex/util.hpp"

using namespace topex;

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 gen(123);
  std::uniform_real_distribution<double> mag(-40, 40);
  for (int i = 0; i < 2000; ++i) {
    double v = std::ldexp(static_cast<double>(gen()) / 1e18, static_cast<int>(mag(gen)));
    std::string s = format_double(v);
    CHECK(parse_double(s, "round trip") == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(parse_double(format_double(0.1), "t") == 0.1);
}

TEST_CASE("parse helpers reject garbage with context") {
  CHECK_THROWS_WITH_AS(parse_double("abc", "weight"), doctest::Contains("weight"),
                       std::runtime_error);
  CHECK_THROWS_AS(parse_int("12x", "count"), std::runtime_error);
  CHECK(parse_int("-3", "count") == -3);
}

TEST_CASE("split and join are inverses on simple fields") {
  std::vector<std::string> fields = {"a", "", "c d", "e"};
  CHECK(split(join(fields, '\t'), '\t') == fields);
  CHECK(split("", ',').size() == 1);
}

TEST_CASE("deterministic_sum is independent of input order") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> values(500);
  for (auto& v : values) v = std::ldexp(dist(gen), static_cast<int>(gen() % 40));
  std::vector<double> shuffled = values;
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  std::vector<double> a = values;
  std::vector<double> b = shuffled;
  CHECK(deterministic_sum(a) == deterministic_sum(b));
}

TEST_CASE("fnv1a64 matches reference vectors") {
  // Reference values computed from the FNV-1a definition.
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("write_file creates parent directories and read_file round-trips") {
  std::string dir = (std::filesystem::temp_directory_path() / "topex_util_test").string();
  std::filesystem::remove_all(dir);
  std::string path = dir + "/nested/deep/file.txt";
  write_file(path, "hello\nworld\n");
  CHECK(read_file(path, "test file") == "hello\nworld\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("require_file throws MissingArtifactError naming the artifact") {
  CHECK_THROWS_WITH_AS(require_file("/nonexistent/path/x.tsv", "feature store"),
                       doctest::Contains("feature store"), MissingArtifactError);
}

TEST_CASE("to_lower_ascii") {
  CHECK(to_lower_ascii("HeLLo 123 \xc3\x84") == "hello 123 \xc3\x84");
}
