#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace topex {

// Thrown by pipeline stages when a required input artifact is absent.
class MissingArtifactError : public std::runtime_error {
 public:
  explicit MissingArtifactError(const std::string& what) : std::runtime_error(what) {}
};

void require_file(const std::string& path, const std::string& what);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, char sep);

// Reads a whole file; throws MissingArtifactError if it does not exist.
std::string read_file(const std::string& path, const std::string& what);
void write_file(const std::string& path, const std::string& content);

// Round-trip safe decimal form ("%.17g" trimmed by the shortest-first probe).
std::string format_double(double v);
double parse_double(std::string_view s, const std::string& context);
int64_t parse_int(std::string_view s, const std::string& context);

uint64_t fnv1a64(std::string_view s);
inline uint64_t fnv1a64_mix(uint64_t h, uint64_t v) {
  h ^= v;
  return h * 0x100000001b3ULL;
}

// Sums contributions in ascending value order so the result does not depend
// on how the inputs were partitioned or permuted upstream.
double deterministic_sum(std::vector<double>& contributions);

std::string to_lower_ascii(std::string_view s);

}  // namespace topex
