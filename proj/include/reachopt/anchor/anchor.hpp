#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "reachopt/graph/anchor_context.hpp"
#include "reachopt/graph/search_state.hpp"
#include "reachopt/rng.hpp"

namespace reachopt::anchor {

struct AnchorParams {
  std::size_t context_size = 5;
  std::size_t beam_width = 1000;
  std::size_t batch_size = 20;     // contexts selected per pass
  std::size_t seeds_high = 100;    // best-scored singletons seeding the beam
  std::size_t seeds_explore = 200; // least-used singletons seeding the beam
  double alpha = 0.5;              // exploration weight
  double beta = 1.0;               // diversity weight
  double lambda_miss = 0.5;
  double lambda_visit = 0.1;
  double lambda_recent = 0.2;
  double gamma = 5.0;              // recency decay
  double epsilon = 1e-8;
  bool use_repeat_penalty = true;  // false drops the penalty from the beam score

  // Throws InvalidArgument.
  void validate() const;
};

// Mean observed score, minus lambda_miss times the unobserved fraction.
double property_score(const AnchorContext& ctx, const SearchState& state, const AnchorParams& params);

// Mean of 1/sqrt(c(v)+1).
double exploration_score(const AnchorContext& ctx, const SearchTrace& trace);

// lambda_visit * mean log(1+c(v)) + lambda_recent * mean exp(-(t-rho(v))/gamma)
// over members that were ever selected.
double repeat_penalty(const AnchorContext& ctx, const SearchTrace& trace, int t, const AnchorParams& params);

// property + alpha*exploration - repeat penalty, evaluated at the current pass.
double beam_score(const AnchorContext& ctx, const SearchState& state, const AnchorParams& params);

// property + alpha*exploration; the rerank score before the diversity term.
double base_rank_score(const AnchorContext& ctx, const SearchState& state, const AnchorParams& params);

// Connected contexts of size min(context_size, component size), best first
// (score descending, key ascending). At most beam_width of them.
// Throws EmptyGraph.
std::vector<AnchorContext> beam_search(const SearchState& state, const AnchorParams& params, Rng& rng);

// Greedy diversity rerank: repeatedly picks the context maximizing
// base_rank_score - beta * max Jaccard to the already chosen ones.
// Ties go to the smaller key. Throws EmptyPool.
std::vector<AnchorContext> select_anchors(std::span<const AnchorContext> pool, const SearchState& state,
                                          const AnchorParams& params);

// Ablation: batch_size contexts, each a random frontier walk from a random node.
// Throws EmptyGraph.
std::vector<AnchorContext> random_anchors(const SearchState& state, const AnchorParams& params, Rng& rng);

}  // namespace reachopt::anchor
