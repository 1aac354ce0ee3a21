#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "reachopt/graph/search_state.hpp"
#include "reachopt/rng.hpp"

namespace fixtures {

using reachopt::BudgetLedger;
using reachopt::MoleculeId;
using reachopt::SearchState;

inline std::string name(std::size_t i) { return "m" + std::to_string(i); }

// Seeds m0..m{n-1} with the given index edges.
inline SearchState state_from(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                              std::size_t budget = 1000) {
  std::vector<std::string> seeds;
  for (std::size_t i = 0; i < n; ++i) seeds.push_back(name(i));
  std::vector<std::pair<std::string, std::string>> named;
  for (auto [a, b] : edges) named.emplace_back(name(a), name(b));
  return SearchState::init(seeds, named, BudgetLedger{budget, 0, {}});
}

inline SearchState path_state(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return state_from(n, edges);
}

// Random graph on n nodes with each pair present with probability p.
inline std::vector<std::pair<std::size_t, std::size_t>> random_edges(std::size_t n, double p, reachopt::Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.uniform01() < p) edges.emplace_back(i, j);
    }
  }
  return edges;
}

inline void score_all(SearchState& state, const std::vector<double>& raw) {
  for (std::size_t i = 0; i < raw.size(); ++i) state.record_score(MoleculeId{static_cast<std::uint32_t>(i)}, raw[i], 0);
}

}  // namespace fixtures
