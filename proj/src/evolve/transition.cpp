#include "reachopt/evolve/transition.hpp"

#include "reachopt/error.hpp"
#include "reachopt/metrics/metrics.hpp"

namespace reachopt::evolve {

PairFilter tanimoto_prefilter(synth::DomainSpec spec, double floor) {
  return [spec = std::move(spec), floor](std::string_view a, std::string_view b) {
    return synth::tanimoto(synth::fingerprint(a, spec), synth::fingerprint(b, spec)) >= floor;
  };
}

std::map<std::string, std::vector<MoleculeId>> predict_insert_edges(const std::vector<std::string>& retained,
                                                                    const SearchState& state, const LinkScorer& scorer,
                                                                    double tau, const PairFilter& prefilter) {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::kInvalidArgument, "tau must lie in (0, 1)");
  std::map<std::string, std::vector<MoleculeId>> out;
  const auto& nodes = state.graph().nodes();
  for (const auto& x : retained) {
    auto& targets = out[x];
    for (const auto& u : nodes) {
      if (prefilter && !prefilter(x, u.repr)) continue;
      if (scorer.score(x, u.repr) > tau) targets.push_back(u.id);
    }
  }
  return out;
}

TransitionReport transition(SearchState& state, const std::vector<std::string>& raw_candidates,
                            const LinkScorer& scorer, Oracle& oracle, const DomainAdapter& domain,
                            const TransitionParams& params) {
  TransitionReport report;
  report.iteration = state.current_pass();
  report.raw = raw_candidates.size();

  const CritiqueReport crit = critique(raw_candidates, state, domain);
  report.retained = crit.retained.size();
  for (const auto& r : crit.rejected) {
    if (r.reason == RejectReason::kInvalid) {
      ++report.rejected_invalid;
    } else {
      ++report.rejected_duplicate;
    }
  }

  std::vector<std::string> scored;
  for (const auto& x : crit.retained) {
    if (state.props().contains(x)) {
      ++report.cache_hits;
      scored.push_back(x);
      continue;
    }
    if (state.budget().exhausted()) {
      ++report.deferred;
      continue;
    }
    const double raw = oracle.evaluate(x);
    state.record_candidate_score(x, raw, report.iteration);
    ++report.oracle_calls;
    scored.push_back(x);
  }
  report.scored = scored.size();

  if (params.frozen_graph) {
    report.frozen_skipped = scored.size();
    for (const auto& x : scored) state.log_rejected(x);
  } else {
    // The map orders candidates ascending, which is the insertion order.
    const auto edges = predict_insert_edges(scored, state, scorer, params.tau, params.prefilter);
    for (const auto& [x, targets] : edges) {
      if (targets.empty()) {
        ++report.rejected_unconnected;
        report.unconnected.push_back(x);
        state.log_rejected(x);
        continue;
      }
      const MoleculeId id = state.insert_molecule(x, targets, report.iteration);
      report.insertions.push_back({x, id, targets});
      ++report.inserted;
    }
  }

  report.budget_exhausted = state.budget().exhausted();
  const auto history = state.props().normalized_history();
  if (!history.empty()) {
    report.top10_mean = metrics::top_k_mean(history, 10);
    report.top100_mean = metrics::top_k_mean(history, 100);
  }
  state.advance_iteration();
  return report;
}

}  // namespace reachopt::evolve
