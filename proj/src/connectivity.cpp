#include "topex/connectivity.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "topex/util.hpp"

namespace topex {

double connectivity(const ConnectivityVector& c) {
  double sum_sq = 0.0;
  for (const auto& [graph, degree] : c) sum_sq += degree * degree;
  return std::sqrt(sum_sq);
}

ConnectivityTable load_connectivity(const std::string& path) {
  require_file(path, "connectivity file");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ConnectivityTable table;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected 3 fields");
    }
    double degree = parse_double(fields[2], path + " line " + std::to_string(line_no));
    if (degree < 0) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": negative in-degree");
    }
    table[fields[0]][fields[1]] += degree;
  }
  return table;
}

void save_connectivity(const ConnectivityTable& table, const std::string& path) {
  std::map<std::string, const ConnectivityVector*> ordered;
  for (const auto& [user, vec] : table) ordered.emplace(user, &vec);
  std::ostringstream out;
  out << "# connectivity\tuser\tgraph\tin_degree\n";
  for (const auto& [user, vec] : ordered) {
    for (const auto& [graph, degree] : *vec) {
      out << user << '\t' << graph << '\t' << format_double(degree) << "\n";
    }
  }
  write_file(path, out.str());
}

std::unordered_map<std::string, double> connectivity_norms(const ConnectivityTable& table) {
  std::unordered_map<std::string, double> norms;
  norms.reserve(table.size());
  for (const auto& [user, vec] : table) norms.emplace(user, connectivity(vec));
  return norms;
}

}  // namespace topex
