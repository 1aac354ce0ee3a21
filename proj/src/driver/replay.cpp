#include <istream>
#include <map>
#include <set>

#include "reachopt/driver/external.hpp"
#include "reachopt/driver/run.hpp"
#include "reachopt/error.hpp"
#include "reachopt/synth/domain.hpp"

namespace reachopt::driver {

using nlohmann::json;

RunLog read_run_log(std::istream& in) {
  RunLog log;
  bool header = false;
  std::map<std::uint32_t, std::pair<std::string, bool>> nodes;  // id -> (molecule, is seed)
  struct Call {
    std::string molecule;
    int iteration;
    double raw;
    double normalized;
  };
  std::vector<Call> calls;

  std::string line;
  std::size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json rec = json::parse(line);
      const std::string kind = rec.at("kind").get<std::string>();
      if (kind == "header") {
        if (rec.at("format") != "reachopt-run-log") throw Error(ErrorCode::kIoError, "not a run log");
        header = true;
        log.input.budget = rec.at("budget").get<std::size_t>();
        const auto& domain = rec.at("domain");
        if (!domain.contains("external")) {
          synth::DomainSpec spec;
          spec.alphabet = domain.at("alphabet").get<std::string>();
          spec.length = domain.at("length").get<std::size_t>();
          log.synthetic = spec;
        }
        const auto& m = rec.at("metrics");
        log.options.degree_over_all_nodes = m.at("degree_over_all_nodes").get<bool>();
        for (const auto& t : m.at("success_thresholds")) {
          log.options.success_thresholds.push_back(
              {t.at("threshold").get<double>(),
               t.at("direction") == "leq" ? metrics::Direction::kLeq : metrics::Direction::kGeq});
        }
      } else if (kind == "seed") {
        nodes[rec.at("id").get<std::uint32_t>()] = {rec.at("molecule").get<std::string>(), true};
      } else if (kind == "insert") {
        nodes[rec.at("id").get<std::uint32_t>()] = {rec.at("molecule").get<std::string>(), false};
      } else if (kind == "call") {
        if (rec.at("call_index").get<std::size_t>() != calls.size() + 1) {
          throw Error(ErrorCode::kIoError, "call indices are not contiguous");
        }
        calls.push_back({rec.at("molecule").get<std::string>(), rec.at("iteration").get<int>(),
                         rec.at("raw").get<double>(), rec.at("normalized").get<double>()});
      } else if (kind == "iteration") {
        if (rec.contains("stop_reason")) log.stop_reason = rec["stop_reason"].get<std::string>();
      } else {
        throw Error(ErrorCode::kIoError, "unknown record kind '" + kind + "'");
      }
      if (!header) throw Error(ErrorCode::kIoError, "run log does not start with a header");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIoError, "run log line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!header) throw Error(ErrorCode::kIoError, "empty run log");

  std::set<std::string> in_graph;
  std::uint32_t expected = 0;
  for (const auto& [id, entry] : nodes) {
    if (id != expected++) throw Error(ErrorCode::kIoError, "node ids are not dense");
    log.input.view.all_nodes.push_back(entry.first);
    if (!entry.second) log.input.view.generated.push_back(entry.first);
    in_graph.insert(entry.first);
  }
  for (const auto& c : calls) {
    log.input.call_scores.push_back(c.normalized);
    if (c.iteration > 0) {
      log.input.generated_raw.push_back(c.raw);
      log.generated_normalized.push_back(c.normalized);
    }
    if (!in_graph.contains(c.molecule)) {
      log.input.view.all_nodes.push_back(c.molecule);
      log.input.view.generated.push_back(c.molecule);
    }
  }
  return log;
}

metrics::MetricReport replay_metrics(const RunLog& log, const std::optional<RunConfig>& config) {
  if (log.synthetic) {
    const synth::SynthDomain domain(*log.synthetic);
    return metrics::compute_report(
        log.input, [&](std::string_view a, std::string_view b) { return domain.related(a, b); }, log.options);
  }
  if (!config || !config->domain.external) {
    throw Error(ErrorCode::kConfigError, "the log uses an external domain; pass the run config");
  }
  const ExternalDomain domain(std::make_shared<ProtocolClient>(config->domain.endpoint));
  return metrics::compute_report(
      log.input, [&](std::string_view a, std::string_view b) { return domain.related(a, b); }, log.options);
}

}  // namespace reachopt::driver
