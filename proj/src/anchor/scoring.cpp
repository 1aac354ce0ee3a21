#include <cmath>

#include "reachopt/anchor/anchor.hpp"
#include "reachopt/error.hpp"

namespace reachopt::anchor {

void AnchorParams::validate() const {
  if (context_size < 1) throw Error(ErrorCode::kInvalidArgument, "context_size must be >= 1");
  if (beam_width < 1) throw Error(ErrorCode::kInvalidArgument, "beam_width must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (!(gamma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must be > 0");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be > 0");
}

double property_score(const AnchorContext& ctx, const SearchState& state, const AnchorParams& params) {
  double weighted = 0.0;
  double observed = 0.0;
  for (MoleculeId v : ctx.members()) {
    if (auto s = state.score_of(v)) {
      weighted += *s;
      observed += 1.0;
    }
  }
  const double n = static_cast<double>(ctx.size());
  return weighted / (observed + params.epsilon) - params.lambda_miss * (1.0 - observed / n);
}

double exploration_score(const AnchorContext& ctx, const SearchTrace& trace) {
  double sum = 0.0;
  for (MoleculeId v : ctx.members()) sum += 1.0 / std::sqrt(static_cast<double>(trace.usage(v)) + 1.0);
  return sum / static_cast<double>(ctx.size());
}

double repeat_penalty(const AnchorContext& ctx, const SearchTrace& trace, int t, const AnchorParams& params) {
  double visit = 0.0;
  double recent = 0.0;
  for (MoleculeId v : ctx.members()) {
    visit += std::log1p(static_cast<double>(trace.usage(v)));
    if (auto rho = trace.last_selected(v)) recent += std::exp(-static_cast<double>(t - *rho) / params.gamma);
  }
  const double n = static_cast<double>(ctx.size());
  return params.lambda_visit * visit / n + params.lambda_recent * recent / n;
}

double base_rank_score(const AnchorContext& ctx, const SearchState& state, const AnchorParams& params) {
  return property_score(ctx, state, params) + params.alpha * exploration_score(ctx, state.trace());
}

double beam_score(const AnchorContext& ctx, const SearchState& state, const AnchorParams& params) {
  double score = base_rank_score(ctx, state, params);
  if (params.use_repeat_penalty) score -= repeat_penalty(ctx, state.trace(), state.current_pass(), params);
  return score;
}

}  // namespace reachopt::anchor
