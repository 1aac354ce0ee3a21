#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reachopt/driver/config.hpp"
#include "reachopt/graph/search_state.hpp"
#include "reachopt/metrics/metrics.hpp"

namespace reachopt::driver {

// Plateau detector over the running top-100 mean. The first value is only a
// reference; each later value counts as a stall when it improves on the
// previous one by less than min_delta, and resets the count otherwise.
class EarlyStopper {
 public:
  explicit EarlyStopper(EarlyStopRule rule) : rule_(rule) {}

  // True once the stall count reaches patience.
  bool update(double value);
  int stall() const { return stall_; }
  bool primed() const { return primed_; }

 private:
  EarlyStopRule rule_;
  double previous_ = 0.0;
  bool primed_ = false;
  int stall_ = 0;
};

struct RunResult {
  SearchState state;
  metrics::MetricReport report;
  std::string stop_reason;  // budget | early_stop | max_iterations | oracle_failure
  int iterations = 0;       // completed passes
  std::vector<std::string> log_lines;
};

// The closed loop: anchors -> generation -> transition -> log, until a stop
// rule fires. When config.out_dir is set, writes run_log.jsonl,
// metrics.json, checkpoint.jsonl and distribution.tsv there.
// Throws ConfigError for unusable seeds or endpoints; an unrecoverable
// oracle ends the run with stop_reason oracle_failure instead of throwing.
RunResult run(const RunConfig& config);

// The metric report as JSON text, exactly as written to metrics.json.
std::string report_text(const metrics::MetricReport& report);

// What a run log holds for metric recomputation.
struct RunLog {
  metrics::MetricInput input;
  metrics::MetricOptions options;
  std::optional<synth::DomainSpec> synthetic;  // nullopt for an external domain
  std::vector<double> generated_normalized;    // call order, seeds excluded
  std::string stop_reason;
};

// Throws IoError on malformed input.
RunLog read_run_log(std::istream& in);

// Recomputes the final report from a log. An external domain needs the
// endpoint from a config; a synthetic one is rebuilt from the log header.
// Throws ConfigError when no edge relation is available.
metrics::MetricReport replay_metrics(const RunLog& log, const std::optional<RunConfig>& config = std::nullopt);

// "lower\tupper\tcount" rows, with a header line.
void write_distribution(const std::vector<metrics::HistogramRow>& rows, std::ostream& out);

}  // namespace reachopt::driver
