#include <algorithm>

#include "reachopt/anchor/anchor.hpp"
#include "reachopt/error.hpp"

namespace reachopt::anchor {

std::vector<AnchorContext> select_anchors(std::span<const AnchorContext> pool, const SearchState& state,
                                          const AnchorParams& params) {
  if (pool.empty()) throw Error(ErrorCode::kEmptyPool, "no candidate anchor contexts");
  std::vector<AnchorContext> candidates(pool.begin(), pool.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<double> base(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) base[i] = base_rank_score(candidates[i], state, params);
  std::vector<double> overlap(candidates.size(), 0.0);
  std::vector<bool> used(candidates.size(), false);

  std::vector<AnchorContext> chosen;
  while (chosen.size() < params.batch_size && chosen.size() < candidates.size()) {
    std::size_t best = candidates.size();
    double best_score = 0.0;
    // Candidates are in key order, so strict > keeps the smallest key on ties.
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      const double s = base[i] - params.beta * overlap[i];
      if (best == candidates.size() || s > best_score) {
        best = i;
        best_score = s;
      }
    }
    used[best] = true;
    chosen.push_back(candidates[best]);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!used[i]) overlap[i] = std::max(overlap[i], jaccard(candidates[i], candidates[best]));
    }
  }
  return chosen;
}

std::vector<AnchorContext> random_anchors(const SearchState& state, const AnchorParams& params, Rng& rng) {
  params.validate();
  const auto& graph = state.graph();
  if (graph.node_count() == 0) throw Error(ErrorCode::kEmptyGraph, "random anchors on an empty graph");
  std::vector<AnchorContext> out;
  out.reserve(params.batch_size);
  for (std::size_t b = 0; b < params.batch_size; ++b) {
    AnchorContext ctx({MoleculeId{static_cast<std::uint32_t>(rng.uniform_index(graph.node_count()))}});
    while (ctx.size() < params.context_size) {
      const auto front = frontier(ctx, graph);
      if (front.empty()) break;
      ctx = ctx.with(front[rng.uniform_index(front.size())]);
    }
    out.push_back(std::move(ctx));
  }
  return out;
}

}  // namespace reachopt::anchor
