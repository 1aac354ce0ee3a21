#include "reachopt/driver/config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>

#include "reachopt/error.hpp"

namespace reachopt::driver {

using nlohmann::json;

std::string_view to_string(Ablation ablation) {
  switch (ablation) {
    case Ablation::kNone: return "none";
    case Ablation::kRandomAnchors: return "random_anchors";
    case Ablation::kRandomGenerator: return "random_generator";
    case Ablation::kFrozenGraph: return "frozen_graph";
  }
  return "none";
}

Ablation parse_ablation(std::string_view name) {
  for (auto a : {Ablation::kNone, Ablation::kRandomAnchors, Ablation::kRandomGenerator, Ablation::kFrozenGraph}) {
    if (to_string(a) == name) return a;
  }
  throw Error(ErrorCode::kConfigError, "unknown ablation '" + std::string(name) + "'");
}

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::kConfigError, where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorCode::kConfigError, "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfigError, std::string("bad value for '") + key + "' in " + where);
  }
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

std::string kind_of(const json& obj, const std::string& where) {
  if (!obj.contains("kind") || !obj["kind"].is_string()) {
    throw Error(ErrorCode::kConfigError, where + " needs a string 'kind'");
  }
  return obj["kind"].get<std::string>();
}

}  // namespace

ProtocolEndpoint parse_endpoint(const json& doc) {
  check_keys(doc, {"command", "host", "port", "timeout_ms"}, "endpoint");
  ProtocolEndpoint ep;
  if (doc.contains("command")) {
    ep.transport = ProtocolEndpoint::Transport::kChildProcess;
    read(doc, "command", ep.command, "endpoint");
  } else {
    ep.transport = ProtocolEndpoint::Transport::kTcp;
    read(doc, "host", ep.host, "endpoint");
    read(doc, "port", ep.port, "endpoint");
  }
  read(doc, "timeout_ms", ep.timeout_ms, "endpoint");
  ep.validate();
  return ep;
}

nlohmann::ordered_json endpoint_to_json(const ProtocolEndpoint& endpoint) {
  nlohmann::ordered_json out;
  if (endpoint.transport == ProtocolEndpoint::Transport::kChildProcess) {
    out["command"] = endpoint.command;
  } else {
    out["host"] = endpoint.host;
    out["port"] = endpoint.port;
  }
  out["timeout_ms"] = endpoint.timeout_ms;
  return out;
}

void RunConfig::validate() const {
  try {
    if (!domain.external) domain.spec.validate();
    anchor.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::kConfigError, "tau must lie in (0, 1)");
  if (n_per_context < 1) throw Error(ErrorCode::kConfigError, "n_per_context must be >= 1");
  if (early_stop.patience < 1) throw Error(ErrorCode::kConfigError, "early_stop.patience must be >= 1");
  if (early_stop.min_delta < 0.0) throw Error(ErrorCode::kConfigError, "early_stop.min_delta must be >= 0");
  const bool synthetic = !domain.external;
  if (!synthetic) {
    if (generator.kind != GeneratorConfig::Kind::kExternal || ablation == Ablation::kRandomGenerator) {
      throw Error(ErrorCode::kConfigError, "builtin generators need the synthetic domain");
    }
    if (link.kind == LinkConfig::Kind::kLearned) {
      throw Error(ErrorCode::kConfigError, "the learned link model needs the synthetic domain");
    }
    if (prefilter) throw Error(ErrorCode::kConfigError, "the fingerprint prefilter needs the synthetic domain");
    if (oracle.kind == OracleConfig::Kind::kHiddenTarget || oracle.kind == OracleConfig::Kind::kNk) {
      throw Error(ErrorCode::kConfigError, "builtin oracles need the synthetic domain");
    }
    if (seeds.file.empty()) throw Error(ErrorCode::kConfigError, "an external domain needs a seed file");
  }
  if (synthetic && oracle.kind == OracleConfig::Kind::kNk && oracle.nk_k >= domain.spec.length) {
    throw Error(ErrorCode::kConfigError, "oracle.k must be < domain.length");
  }
  if (link.kind == LinkConfig::Kind::kLearned && link.model_path.empty()) {
    throw Error(ErrorCode::kConfigError, "link.model is required for a learned link model");
  }
}

RunConfig parse_config(const json& doc, const std::string& base_dir) {
  check_keys(doc, {"domain", "oracle", "normalizer", "seeds", "generator", "link", "anchor", "tau", "n_per_context",
                   "budget", "early_stop", "max_iterations", "score_seeds", "prefilter", "metrics", "ablation", "seed",
                   "out_dir"},
             "config");
  RunConfig cfg;

  if (doc.contains("domain")) {
    const auto& d = doc["domain"];
    check_keys(d, {"alphabet", "length", "external"}, "domain");
    read(d, "alphabet", cfg.domain.spec.alphabet, "domain");
    read(d, "length", cfg.domain.spec.length, "domain");
    if (d.contains("external")) {
      cfg.domain.external = true;
      cfg.domain.endpoint = parse_endpoint(d["external"]);
    }
  }

  if (doc.contains("oracle")) {
    const auto& o = doc["oracle"];
    const std::string kind = kind_of(o, "oracle");
    if (kind == "hidden_target") {
      check_keys(o, {"kind", "target"}, "oracle");
      cfg.oracle.kind = OracleConfig::Kind::kHiddenTarget;
      if (o.contains("target")) cfg.oracle.target = o["target"].get<std::string>();
    } else if (kind == "nk") {
      check_keys(o, {"kind", "k", "seed"}, "oracle");
      cfg.oracle.kind = OracleConfig::Kind::kNk;
      read(o, "k", cfg.oracle.nk_k, "oracle");
      if (o.contains("seed")) cfg.oracle.nk_seed = o["seed"].get<std::uint64_t>();
    } else if (kind == "constant") {
      check_keys(o, {"kind", "value"}, "oracle");
      cfg.oracle.kind = OracleConfig::Kind::kConstant;
      read(o, "value", cfg.oracle.constant, "oracle");
    } else if (kind == "external") {
      check_keys(o, {"kind", "endpoint"}, "oracle");
      cfg.oracle.kind = OracleConfig::Kind::kExternal;
      if (!o.contains("endpoint")) throw Error(ErrorCode::kConfigError, "external oracle needs an endpoint");
      cfg.oracle.endpoint = parse_endpoint(o["endpoint"]);
    } else {
      throw Error(ErrorCode::kConfigError, "unknown oracle kind '" + kind + "'");
    }
  }

  if (doc.contains("normalizer")) {
    check_keys(doc["normalizer"], {"scale", "offset"}, "normalizer");
    read(doc["normalizer"], "scale", cfg.normalizer.scale, "normalizer");
    read(doc["normalizer"], "offset", cfg.normalizer.offset, "normalizer");
  }

  if (doc.contains("seeds")) {
    const auto& s = doc["seeds"];
    check_keys(s, {"file", "edges_file", "series", "per_series", "variable_sites"}, "seeds");
    read(s, "file", cfg.seeds.file, "seeds");
    read(s, "edges_file", cfg.seeds.edges_file, "seeds");
    read(s, "series", cfg.seeds.series.series, "seeds");
    read(s, "per_series", cfg.seeds.series.per_series, "seeds");
    read(s, "variable_sites", cfg.seeds.series.variable_sites, "seeds");
    cfg.seeds.file = resolve(cfg.seeds.file, base_dir);
    cfg.seeds.edges_file = resolve(cfg.seeds.edges_file, base_dir);
  }

  if (doc.contains("generator")) {
    const auto& g = doc["generator"];
    const std::string kind = kind_of(g, "generator");
    check_keys(g, {"kind", "endpoint"}, "generator");
    if (kind == "rule_based") {
      cfg.generator.kind = GeneratorConfig::Kind::kRuleBased;
    } else if (kind == "random_mutation") {
      cfg.generator.kind = GeneratorConfig::Kind::kRandomMutation;
    } else if (kind == "external") {
      cfg.generator.kind = GeneratorConfig::Kind::kExternal;
      if (!g.contains("endpoint")) throw Error(ErrorCode::kConfigError, "external generator needs an endpoint");
      cfg.generator.endpoint = parse_endpoint(g["endpoint"]);
    } else {
      throw Error(ErrorCode::kConfigError, "unknown generator kind '" + kind + "'");
    }
  }

  if (doc.contains("link")) {
    const auto& l = doc["link"];
    const std::string kind = kind_of(l, "link");
    check_keys(l, {"kind", "model", "endpoint"}, "link");
    if (kind == "exact") {
      cfg.link.kind = LinkConfig::Kind::kExact;
    } else if (kind == "learned") {
      cfg.link.kind = LinkConfig::Kind::kLearned;
      read(l, "model", cfg.link.model_path, "link");
      cfg.link.model_path = resolve(cfg.link.model_path, base_dir);
    } else if (kind == "external") {
      cfg.link.kind = LinkConfig::Kind::kExternal;
      if (!l.contains("endpoint")) throw Error(ErrorCode::kConfigError, "external link scorer needs an endpoint");
      cfg.link.endpoint = parse_endpoint(l["endpoint"]);
    } else {
      throw Error(ErrorCode::kConfigError, "unknown link kind '" + kind + "'");
    }
  }

  if (doc.contains("anchor")) {
    const auto& a = doc["anchor"];
    const std::string w = "anchor";
    check_keys(a, {"context_size", "beam_width", "batch_size", "seeds_high", "seeds_explore", "alpha", "beta",
                   "lambda_miss", "lambda_visit", "lambda_recent", "gamma", "epsilon", "use_repeat_penalty"},
               w);
    auto& p = cfg.anchor;
    read(a, "context_size", p.context_size, w);
    read(a, "beam_width", p.beam_width, w);
    read(a, "batch_size", p.batch_size, w);
    read(a, "seeds_high", p.seeds_high, w);
    read(a, "seeds_explore", p.seeds_explore, w);
    read(a, "alpha", p.alpha, w);
    read(a, "beta", p.beta, w);
    read(a, "lambda_miss", p.lambda_miss, w);
    read(a, "lambda_visit", p.lambda_visit, w);
    read(a, "lambda_recent", p.lambda_recent, w);
    read(a, "gamma", p.gamma, w);
    read(a, "epsilon", p.epsilon, w);
    read(a, "use_repeat_penalty", p.use_repeat_penalty, w);
  }

  read(doc, "tau", cfg.tau, "config");
  read(doc, "n_per_context", cfg.n_per_context, "config");
  read(doc, "budget", cfg.budget, "config");
  read(doc, "max_iterations", cfg.max_iterations, "config");
  read(doc, "score_seeds", cfg.score_seeds, "config");
  read(doc, "seed", cfg.seed, "config");
  read(doc, "out_dir", cfg.out_dir, "config");
  cfg.out_dir = resolve(cfg.out_dir, base_dir);
  if (doc.contains("prefilter") && !doc["prefilter"].is_null()) {
    double floor = 0.0;
    read(doc, "prefilter", floor, "config");
    cfg.prefilter = floor;
  }
  if (doc.contains("early_stop")) {
    check_keys(doc["early_stop"], {"patience", "min_delta"}, "early_stop");
    read(doc["early_stop"], "patience", cfg.early_stop.patience, "early_stop");
    read(doc["early_stop"], "min_delta", cfg.early_stop.min_delta, "early_stop");
  }
  if (doc.contains("metrics")) {
    const auto& m = doc["metrics"];
    check_keys(m, {"success_thresholds", "degree_over_all_nodes"}, "metrics");
    read(m, "degree_over_all_nodes", cfg.metric_options.degree_over_all_nodes, "metrics");
    if (m.contains("success_thresholds")) {
      for (const auto& t : m["success_thresholds"]) {
        check_keys(t, {"threshold", "direction"}, "metrics.success_thresholds");
        metrics::SuccessThreshold st;
        read(t, "threshold", st.threshold, "metrics.success_thresholds");
        const std::string dir = t.value("direction", "geq");
        if (dir == "geq") {
          st.direction = metrics::Direction::kGeq;
        } else if (dir == "leq") {
          st.direction = metrics::Direction::kLeq;
        } else {
          throw Error(ErrorCode::kConfigError, "direction must be 'geq' or 'leq'");
        }
        cfg.metric_options.success_thresholds.push_back(st);
      }
    }
  }
  if (doc.contains("ablation")) {
    if (!doc["ablation"].is_string()) throw Error(ErrorCode::kConfigError, "ablation must be a string");
    cfg.ablation = parse_ablation(doc["ablation"].get<std::string>());
  }

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfigError, "config " + path + ": " + e.what());
  }
  const auto base = std::filesystem::path(path).parent_path().string();
  return parse_config(doc, base.empty() ? "." : base);
}

}  // namespace reachopt::driver
