#include "reachopt/metrics/metrics.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

#include "reachopt/error.hpp"

namespace reachopt::metrics {

double top_k_mean(std::span<const double> values, std::size_t k) {
  if (values.empty()) throw Error(ErrorCode::kEmptyHistory, "no scores");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  std::vector<double> sorted(values.begin(), values.end());
  const std::size_t take = std::min(k, sorted.size());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(take), sorted.end(),
                    std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += sorted[i];
  return sum / static_cast<double>(take);
}

std::vector<double> running_top_k(std::span<const double> call_scores, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  std::vector<double> out;
  out.reserve(call_scores.size());
  // Min-heap of the current top k; the sum is recomputed from the kept
  // values in sorted order so the result does not depend on arrival order.
  std::priority_queue<double, std::vector<double>, std::greater<>> top;
  for (double s : call_scores) {
    if (top.size() < k) {
      top.push(s);
    } else if (s > top.top()) {
      top.pop();
      top.push(s);
    }
    auto copy = top;
    double sum = 0.0;
    while (!copy.empty()) {
      sum += copy.top();
      copy.pop();
    }
    out.push_back(sum / static_cast<double>(top.size()));
  }
  return out;
}

double auc_topk(std::span<const double> call_scores, std::size_t k, std::size_t budget) {
  if (call_scores.empty()) throw Error(ErrorCode::kEmptyHistory, "no oracle calls");
  if (call_scores.size() > budget) throw Error(ErrorCode::kInvalidArgument, "more calls than budget");
  const auto running = running_top_k(call_scores, k);
  double sum = 0.0;
  for (double r : running) sum += r;
  sum += running.back() * static_cast<double>(budget - running.size());
  return sum / static_cast<double>(budget);
}

GraphView augmented_view(const SearchState& state) {
  GraphView view;
  const auto& graph = state.graph();
  for (const auto& rec : graph.nodes()) {
    view.all_nodes.push_back(rec.repr);
    if (!rec.is_seed()) view.generated.push_back(rec.repr);
  }
  for (const auto& call : state.props().calls()) {
    if (graph.find(call.molecule)) continue;
    view.all_nodes.push_back(call.molecule);
    view.generated.push_back(call.molecule);
  }
  return view;
}

std::vector<std::size_t> generated_degrees(const GraphView& view, const EdgeChecker& checker) {
  std::vector<std::size_t> out;
  out.reserve(view.generated.size());
  for (const auto& x : view.generated) {
    std::size_t d = 0;
    for (const auto& u : view.all_nodes) {
      if (u != x && checker(x, u)) ++d;
    }
    out.push_back(d);
  }
  return out;
}

double isolated_ratio(const GraphView& view, const EdgeChecker& checker) {
  if (view.generated.empty()) throw Error(ErrorCode::kNoGenerated, "no generated molecules");
  const auto deg = generated_degrees(view, checker);
  const auto isolated = std::count(deg.begin(), deg.end(), std::size_t{0});
  return static_cast<double>(isolated) / static_cast<double>(deg.size());
}

double avg_degree(const GraphView& view, const EdgeChecker& checker, bool all_nodes) {
  if (view.generated.empty()) throw Error(ErrorCode::kNoGenerated, "no generated molecules");
  if (!all_nodes) {
    const auto deg = generated_degrees(view, checker);
    double sum = 0.0;
    for (auto d : deg) sum += static_cast<double>(d);
    return sum / static_cast<double>(deg.size());
  }
  double sum = 0.0;
  for (const auto& x : view.all_nodes) {
    for (const auto& u : view.all_nodes) {
      if (u != x && checker(x, u)) sum += 1.0;
    }
  }
  return sum / static_cast<double>(view.all_nodes.size());
}

double success_ratio(std::span<const double> raw_scores, double threshold, Direction direction) {
  if (raw_scores.empty()) throw Error(ErrorCode::kEmptyHistory, "no scores");
  std::size_t pass = 0;
  for (double s : raw_scores) pass += direction == Direction::kGeq ? s >= threshold : s <= threshold;
  return static_cast<double>(pass) / static_cast<double>(raw_scores.size());
}

std::vector<HistogramRow> export_distribution(std::span<const double> normalized_scores) {
  if (normalized_scores.empty()) throw Error(ErrorCode::kEmptyHistory, "no scored generated molecules");
  constexpr std::size_t kBins = 20;
  std::vector<HistogramRow> rows(kBins);
  for (std::size_t i = 0; i < kBins; ++i) {
    rows[i].lower = static_cast<double>(i) / kBins;
    rows[i].upper = static_cast<double>(i + 1) / kBins;
  }
  for (double s : normalized_scores) {
    const double clamped = std::clamp(s, 0.0, 1.0);
    const auto bin = std::min(kBins - 1, static_cast<std::size_t>(clamped * kBins));
    ++rows[bin].count;
  }
  return rows;
}

std::vector<double> generated_scores(const SearchState& state) {
  std::vector<double> out;
  for (const auto& c : state.props().calls()) {
    if (c.iteration > 0) out.push_back(c.normalized);
  }
  return out;
}

nlohmann::ordered_json MetricReport::to_json() const {
  nlohmann::ordered_json success = nlohmann::ordered_json::array();
  for (const auto& [t, v] : success_at) {
    success.push_back({{"threshold", t.threshold},
                       {"direction", t.direction == Direction::kGeq ? "geq" : "leq"},
                       {"fraction", v}});
  }
  return {{"auc_top1", auc_top1},         {"auc_top10", auc_top10},   {"auc_top100", auc_top100},
          {"isolated_ratio", isolated_ratio}, {"avg_degree", avg_degree}, {"success_at", success},
          {"n_generated", n_generated},    {"n_calls", n_calls}};
}

MetricInput metric_input(const SearchState& state) {
  MetricInput in;
  in.call_scores = state.props().normalized_history();
  for (const auto& c : state.props().calls()) {
    if (c.iteration > 0) in.generated_raw.push_back(c.raw);
  }
  in.view = augmented_view(state);
  in.budget = state.budget().limit;
  return in;
}

MetricReport compute_report(const MetricInput& input, const EdgeChecker& checker, const MetricOptions& options) {
  MetricReport report;
  report.n_calls = input.call_scores.size();
  report.n_generated = input.view.generated.size();
  if (!input.call_scores.empty()) {
    report.auc_top1 = auc_topk(input.call_scores, 1, input.budget);
    report.auc_top10 = auc_topk(input.call_scores, 10, input.budget);
    report.auc_top100 = auc_topk(input.call_scores, 100, input.budget);
  }
  if (!input.view.generated.empty()) {
    report.isolated_ratio = isolated_ratio(input.view, checker);
    report.avg_degree = avg_degree(input.view, checker, options.degree_over_all_nodes);
  }
  for (const auto& t : options.success_thresholds) {
    const double v = input.generated_raw.empty() ? 0.0 : success_ratio(input.generated_raw, t.threshold, t.direction);
    report.success_at.emplace_back(t, v);
  }
  return report;
}

}  // namespace reachopt::metrics
