#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "reachopt/graph/search_state.hpp"

namespace reachopt::metrics {

// Mean of the k largest values (all of them when fewer than k).
// Throws EmptyHistory.
double top_k_mean(std::span<const double> values, std::size_t k);

// Running top-k mean after each call.
std::vector<double> running_top_k(std::span<const double> call_scores, std::size_t k);

// (1/budget) * sum over calls 1..budget of the running top-k mean, with the
// last value carried over the unspent budget. Throws EmptyHistory, or
// InvalidArgument when there are more calls than budget.
double auc_topk(std::span<const double> call_scores, std::size_t k, std::size_t budget);

using EdgeChecker = std::function<bool(std::string_view, std::string_view)>;

// The augmented graph as metrics see it: every graph node plus every scored
// candidate that never entered the graph. "generated" are the non-seed
// molecules among them. Both lists have a fixed order (graph ids, then call
// order) so a replay reproduces the same sums.
struct GraphView {
  std::vector<std::string> all_nodes;
  std::vector<std::string> generated;
};

GraphView augmented_view(const SearchState& state);

// Valid-transformation degree of each generated molecule, as judged by
// checker against every other molecule of the augmented graph.
std::vector<std::size_t> generated_degrees(const GraphView& view, const EdgeChecker& checker);

// Throws NoGenerated.
double isolated_ratio(const GraphView& view, const EdgeChecker& checker);
double avg_degree(const GraphView& view, const EdgeChecker& checker, bool all_nodes = false);

enum class Direction { kGeq, kLeq };

// Throws EmptyHistory.
double success_ratio(std::span<const double> raw_scores, double threshold, Direction direction);

struct HistogramRow {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
};

// 20 equal bins over [0,1]; the last bin is closed. Throws EmptyHistory.
std::vector<HistogramRow> export_distribution(std::span<const double> normalized_scores);

// Normalized scores of generated molecules, in call order.
std::vector<double> generated_scores(const SearchState& state);

struct SuccessThreshold {
  double threshold = 0.0;
  Direction direction = Direction::kGeq;
};

struct MetricOptions {
  std::vector<SuccessThreshold> success_thresholds;
  bool degree_over_all_nodes = false;
};

struct MetricReport {
  double auc_top1 = 0.0;
  double auc_top10 = 0.0;
  double auc_top100 = 0.0;
  double isolated_ratio = 0.0;
  double avg_degree = 0.0;
  std::vector<std::pair<SuccessThreshold, double>> success_at;
  std::size_t n_generated = 0;
  std::size_t n_calls = 0;

  nlohmann::ordered_json to_json() const;
};

struct MetricInput {
  std::vector<double> call_scores;     // normalized, call order
  std::vector<double> generated_raw;   // raw scores of generated molecules, call order
  GraphView view;
  std::size_t budget = 0;
};

MetricInput metric_input(const SearchState& state);

// Fields that are undefined for the input (no calls, no generated
// molecules) are reported as 0.
MetricReport compute_report(const MetricInput& input, const EdgeChecker& checker, const MetricOptions& options);

}  // namespace reachopt::metrics
