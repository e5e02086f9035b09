#pragma once

#include <map>
#include <string>
#include <unordered_map>

namespace topex {

// In-degree per named graph, e.g. {"tw_followers": 120, "fb_friends": 45}.
using ConnectivityVector = std::map<std::string, double>;

// Euclidean norm of the in-degree vector; the user's audience-size proxy.
double connectivity(const ConnectivityVector& c);

using ConnectivityTable = std::unordered_map<std::string, ConnectivityVector>;

// Line format: user<TAB>graph<TAB>in_degree. Multiple lines per user.
ConnectivityTable load_connectivity(const std::string& path);
void save_connectivity(const ConnectivityTable& table, const std::string& path);

// Collapses each user's vector to its norm.
std::unordered_map<std::string, double> connectivity_norms(const ConnectivityTable& table);

}  // namespace topex
