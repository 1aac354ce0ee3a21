#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "reachopt/domain.hpp"
#include "reachopt/evolve/critique.hpp"
#include "reachopt/evolve/link.hpp"
#include "reachopt/graph/search_state.hpp"

namespace reachopt::evolve {

// Pair admission test applied before the link scorer; empty means every pair.
using PairFilter = std::function<bool(std::string_view, std::string_view)>;

// Admits pairs whose fingerprint tanimoto is >= floor.
PairFilter tanimoto_prefilter(synth::DomainSpec spec, double floor);

// For each retained candidate, the existing nodes u (ascending) with
// score(candidate, u) > tau. Candidates with no edge map to an empty list.
// Throws InvalidArgument unless 0 < tau < 1.
std::map<std::string, std::vector<MoleculeId>> predict_insert_edges(const std::vector<std::string>& retained,
                                                                    const SearchState& state, const LinkScorer& scorer,
                                                                    double tau, const PairFilter& prefilter = {});

struct TransitionParams {
  double tau = 0.5;
  bool frozen_graph = false;  // score candidates but never insert
  PairFilter prefilter;
};

struct InsertedMolecule {
  std::string molecule;
  MoleculeId id;
  std::vector<MoleculeId> edges;
};

struct TransitionReport {
  int iteration = 0;  // the pass this report describes
  std::size_t raw = 0;
  std::size_t retained = 0;
  std::size_t scored = 0;        // retained candidates that have a score (fresh or cached)
  std::size_t oracle_calls = 0;  // fresh evaluations, each charged to the budget
  std::size_t cache_hits = 0;
  std::size_t inserted = 0;
  std::size_t rejected_unconnected = 0;
  std::size_t rejected_invalid = 0;
  std::size_t rejected_duplicate = 0;  // within batch or already in the graph
  std::size_t deferred = 0;            // retained but cut by the budget
  std::size_t frozen_skipped = 0;      // scored but not inserted because the graph is frozen
  bool budget_exhausted = false;
  double top10_mean = 0.0;
  double top100_mean = 0.0;
  std::vector<InsertedMolecule> insertions;
  std::vector<std::string> unconnected;
};

// One world-model step: critique, score (cache first, then oracle while the
// budget lasts), predict edges against the nodes present at entry, insert
// connected candidates in ascending string order, advance the pass counter.
// Oracle exceptions propagate; running out of budget does not throw.
TransitionReport transition(SearchState& state, const std::vector<std::string>& raw_candidates,
                            const LinkScorer& scorer, Oracle& oracle, const DomainAdapter& domain,
                            const TransitionParams& params);

}  // namespace reachopt::evolve
