#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "reachopt/anchor/anchor.hpp"
#include "reachopt/driver/protocol.hpp"
#include "reachopt/graph/search_state.hpp"
#include "reachopt/metrics/metrics.hpp"
#include "reachopt/synth/domain.hpp"

namespace reachopt::driver {

enum class Ablation { kNone, kRandomAnchors, kRandomGenerator, kFrozenGraph };

std::string_view to_string(Ablation ablation);
// Throws ConfigError.
Ablation parse_ablation(std::string_view name);

struct DomainConfig {
  bool external = false;
  synth::DomainSpec spec;
  ProtocolEndpoint endpoint;
};

struct OracleConfig {
  enum class Kind { kHiddenTarget, kNk, kConstant, kExternal };
  Kind kind = Kind::kHiddenTarget;
  std::optional<std::string> target;  // drawn from the "target" stream when absent
  std::size_t nk_k = 2;
  std::optional<std::uint64_t> nk_seed;  // drawn from the "nk-oracle" stream when absent
  double constant = 0.5;
  ProtocolEndpoint endpoint;
};

struct SeedConfig {
  std::string file;        // one molecule per line; empty means synthetic series
  std::string edges_file;  // tab-separated pairs; empty means derive by exhaustive scan
  synth::SeriesOptions series;
};

struct GeneratorConfig {
  enum class Kind { kRuleBased, kRandomMutation, kExternal };
  Kind kind = Kind::kRuleBased;
  ProtocolEndpoint endpoint;
};

struct LinkConfig {
  enum class Kind { kExact, kLearned, kExternal };
  Kind kind = Kind::kExact;
  std::string model_path;
  ProtocolEndpoint endpoint;
};

struct RunConfig {
  DomainConfig domain;
  OracleConfig oracle;
  Normalizer normalizer;
  SeedConfig seeds;
  GeneratorConfig generator;
  LinkConfig link;
  anchor::AnchorParams anchor;
  double tau = 0.5;
  std::size_t n_per_context = 8;
  std::size_t budget = 1000;
  EarlyStopRule early_stop;
  std::size_t max_iterations = 100000;
  bool score_seeds = true;
  std::optional<double> prefilter;  // tanimoto floor
  metrics::MetricOptions metric_options;
  Ablation ablation = Ablation::kNone;
  std::uint64_t seed = 0;
  std::string out_dir;

  // Throws ConfigError.
  void validate() const;
};

// Parses one config object. Unknown keys anywhere are errors. Relative file
// paths are resolved against base_dir. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");

// Throws ConfigError (unreadable file or bad document).
RunConfig load_config(const std::string& path);

nlohmann::ordered_json endpoint_to_json(const ProtocolEndpoint& endpoint);
ProtocolEndpoint parse_endpoint(const nlohmann::json& doc);

}  // namespace reachopt::driver
