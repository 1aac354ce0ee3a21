#include <algorithm>
#include <map>

#include "reachopt/anchor/anchor.hpp"
#include "reachopt/error.hpp"

namespace reachopt::anchor {

namespace {

struct BeamItem {
  AnchorContext ctx;
  double score = 0.0;
};

// Sort by score descending, key ascending, and keep the best `width`.
void prune(std::vector<BeamItem>& items, std::size_t width) {
  auto better = [](const BeamItem& a, const BeamItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.ctx < b.ctx;
  };
  if (items.size() > width) {
    std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(width), items.end(), better);
    items.resize(width);
  } else {
    std::sort(items.begin(), items.end(), better);
  }
}

// Singletons seeding the beam: the best-scored nodes, then nodes drawn from
// the lowest usage strata. A stratum that fits entirely is taken in id
// order; the one that overflows is sampled uniformly.
std::vector<MoleculeId> seed_nodes(const SearchState& state, const AnchorParams& params, Rng& rng) {
  const auto& graph = state.graph();
  std::vector<std::pair<double, MoleculeId>> scored;
  for (const auto& rec : graph.nodes()) {
    if (auto s = state.score_of(rec.id)) scored.emplace_back(*s, rec.id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<MoleculeId> seeds;
  std::vector<bool> taken(graph.node_count(), false);
  for (std::size_t i = 0; i < scored.size() && i < params.seeds_high; ++i) {
    seeds.push_back(scored[i].second);
    taken[scored[i].second.value] = true;
  }

  std::map<std::uint32_t, std::vector<MoleculeId>> strata;
  for (const auto& rec : graph.nodes()) {
    if (!taken[rec.id.value]) strata[state.trace().usage(rec.id)].push_back(rec.id);
  }
  std::size_t need = params.seeds_explore;
  for (const auto& [usage, ids] : strata) {
    if (need == 0) break;
    if (ids.size() <= need) {
      seeds.insert(seeds.end(), ids.begin(), ids.end());
      need -= ids.size();
    } else {
      auto picks = rng.sample_indices(ids.size(), need);
      std::sort(picks.begin(), picks.end());
      for (std::size_t i : picks) seeds.push_back(ids[i]);
      need = 0;
    }
  }
  return seeds;
}

}  // namespace

std::vector<AnchorContext> beam_search(const SearchState& state, const AnchorParams& params, Rng& rng) {
  params.validate();
  const auto& graph = state.graph();
  if (graph.node_count() == 0) throw Error(ErrorCode::kEmptyGraph, "beam search on an empty graph");

  std::vector<BeamItem> beam;
  for (MoleculeId v : seed_nodes(state, params, rng)) {
    AnchorContext ctx({v});
    beam.push_back({ctx, beam_score(ctx, state, params)});
  }
  prune(beam, params.beam_width);

  for (std::size_t level = 1; level < params.context_size; ++level) {
    std::vector<AnchorContext> children;
    for (const auto& item : beam) {
      const auto front = frontier(item.ctx, graph);
      if (front.empty()) {
        // Component exhausted: the context saturates at its current size.
        children.push_back(item.ctx);
        continue;
      }
      for (MoleculeId u : front) children.push_back(item.ctx.with(u));
    }
    std::sort(children.begin(), children.end());
    children.erase(std::unique(children.begin(), children.end()), children.end());

    std::vector<BeamItem> next;
    next.reserve(children.size());
    for (auto& ctx : children) {
      const double s = beam_score(ctx, state, params);
      next.push_back({std::move(ctx), s});
    }
    prune(next, params.beam_width);
    beam = std::move(next);
  }

  std::vector<AnchorContext> out;
  out.reserve(beam.size());
  for (auto& item : beam) out.push_back(std::move(item.ctx));
  return out;
}

}  // namespace reachopt::anchor
