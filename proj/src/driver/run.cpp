#include "reachopt/driver/run.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "reachopt/anchor/anchor.hpp"
#include "reachopt/driver/external.hpp"
#include "reachopt/error.hpp"
#include "reachopt/evolve/transition.hpp"
#include "reachopt/generate/generator.hpp"
#include "reachopt/graph/checkpoint.hpp"
#include "reachopt/rng.hpp"
#include "reachopt/synth/domain.hpp"

namespace reachopt::driver {

using nlohmann::ordered_json;

bool EarlyStopper::update(double value) {
  if (primed_) {
    if (value - previous_ < rule_.min_delta) {
      ++stall_;
    } else {
      stall_ = 0;
    }
  }
  previous_ = value;
  primed_ = true;
  return stall_ >= rule_.patience;
}

std::string report_text(const metrics::MetricReport& report) { return report.to_json().dump(2) + "\n"; }

void write_distribution(const std::vector<metrics::HistogramRow>& rows, std::ostream& out) {
  out << "lower\tupper\tcount\n";
  for (const auto& r : rows) out << r.lower << '\t' << r.upper << '\t' << r.count << '\n';
}

namespace {

struct Components {
  std::unique_ptr<DomainAdapter> domain;
  std::unique_ptr<Oracle> oracle;
  std::unique_ptr<generate::Generator> generator;
  std::unique_ptr<evolve::LinkScorer> link;
  std::string oracle_label;
};

std::shared_ptr<ProtocolClient> connect(const ProtocolEndpoint& endpoint) {
  try {
    return std::make_shared<ProtocolClient>(endpoint);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, std::string("cannot reach peer: ") + e.what());
  }
}

Components build(const RunConfig& cfg) {
  Components c;
  const auto& spec = cfg.domain.spec;
  if (cfg.domain.external) {
    c.domain = std::make_unique<ExternalDomain>(connect(cfg.domain.endpoint));
  } else {
    c.domain = std::make_unique<synth::SynthDomain>(spec);
  }

  switch (cfg.oracle.kind) {
    case OracleConfig::Kind::kHiddenTarget: {
      std::string target;
      if (cfg.oracle.target) {
        target = *cfg.oracle.target;
      } else {
        auto rng = Rng::stream(cfg.seed, "target");
        target = synth::random_molecule(spec, rng);
      }
      try {
        c.oracle = std::make_unique<synth::HiddenTargetOracle>(spec, target);
      } catch (const Error& e) {
        throw Error(ErrorCode::kConfigError, std::string("oracle.target: ") + e.what());
      }
      c.oracle_label = "hidden_target";
      break;
    }
    case OracleConfig::Kind::kNk: {
      std::uint64_t nk_seed = 0;
      if (cfg.oracle.nk_seed) {
        nk_seed = *cfg.oracle.nk_seed;
      } else {
        nk_seed = Rng::stream(cfg.seed, "nk-oracle").next();
      }
      c.oracle = std::make_unique<synth::NkOracle>(spec, synth::NkSpec{cfg.oracle.nk_k, nk_seed});
      c.oracle_label = "nk";
      break;
    }
    case OracleConfig::Kind::kConstant:
      c.oracle = std::make_unique<synth::ConstantOracle>(cfg.oracle.constant);
      c.oracle_label = "constant";
      break;
    case OracleConfig::Kind::kExternal:
      c.oracle = std::make_unique<ExternalOracle>(connect(cfg.oracle.endpoint));
      c.oracle_label = "external";
      break;
  }

  if (cfg.ablation == Ablation::kRandomGenerator || cfg.generator.kind == GeneratorConfig::Kind::kRandomMutation) {
    c.generator = std::make_unique<generate::RandomMutationGenerator>(spec.alphabet);
  } else if (cfg.generator.kind == GeneratorConfig::Kind::kRuleBased) {
    c.generator = std::make_unique<generate::RuleBasedGenerator>(spec);
  } else {
    c.generator = std::make_unique<generate::ExternalGenerator>(connect(cfg.generator.endpoint));
  }

  switch (cfg.link.kind) {
    case LinkConfig::Kind::kExact:
      c.link = std::make_unique<evolve::ExactLinkScorer>(*c.domain);
      break;
    case LinkConfig::Kind::kLearned: {
      std::ifstream in(cfg.link.model_path);
      if (!in) throw Error(ErrorCode::kConfigError, "cannot read link model " + cfg.link.model_path);
      try {
        c.link = std::make_unique<evolve::FeatureLinkModel>(evolve::FeatureLinkModel::load(in, spec));
      } catch (const Error& e) {
        throw Error(ErrorCode::kConfigError, e.what());
      }
      break;
    }
    case LinkConfig::Kind::kExternal:
      c.link = std::make_unique<ExternalLinkScorer>(connect(cfg.link.endpoint));
      break;
  }
  return c;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

synth::SeedGraph load_seeds(const RunConfig& cfg, const DomainAdapter& domain) {
  synth::SeedGraph g;
  if (cfg.seeds.file.empty()) {
    auto rng = Rng::stream(cfg.seed, "seeds");
    try {
      return synth::analogue_series(cfg.domain.spec, cfg.seeds.series, rng);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigError, std::string("seeds: ") + e.what());
    }
  }
  for (const auto& line : read_lines(cfg.seeds.file)) {
    auto canon = domain.canonicalize(line);
    if (!canon) throw Error(ErrorCode::kConfigError, "invalid seed molecule '" + line + "'");
    g.molecules.push_back(*canon);
  }
  if (cfg.seeds.edges_file.empty()) {
    for (std::size_t i = 0; i < g.molecules.size(); ++i) {
      for (std::size_t j = i + 1; j < g.molecules.size(); ++j) {
        if (domain.related(g.molecules[i], g.molecules[j])) g.edges.emplace_back(g.molecules[i], g.molecules[j]);
      }
    }
  } else {
    for (const auto& line : read_lines(cfg.seeds.edges_file)) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) throw Error(ErrorCode::kConfigError, "edge line without a tab: '" + line + "'");
      auto a = domain.canonicalize(line.substr(0, tab));
      auto b = domain.canonicalize(line.substr(tab + 1));
      if (!a || !b) throw Error(ErrorCode::kConfigError, "invalid molecule in edge line '" + line + "'");
      g.edges.emplace_back(*a, *b);
    }
  }
  return g;
}

ordered_json metric_options_json(const metrics::MetricOptions& options) {
  ordered_json thresholds = ordered_json::array();
  for (const auto& t : options.success_thresholds) {
    thresholds.push_back(
        {{"threshold", t.threshold}, {"direction", t.direction == metrics::Direction::kGeq ? "geq" : "leq"}});
  }
  return {{"success_thresholds", thresholds}, {"degree_over_all_nodes", options.degree_over_all_nodes}};
}

ordered_json call_json(const CallRecord& c) {
  return {{"kind", "call"},          {"call_index", c.call_index}, {"iteration", c.iteration},
          {"molecule", c.molecule}, {"raw", c.raw},               {"normalized", c.normalized}};
}

double top_mean(const SearchState& state, std::size_t k) {
  const auto history = state.props().normalized_history();
  return history.empty() ? 0.0 : metrics::top_k_mean(history, k);
}

class RunLogger {
 public:
  explicit RunLogger(std::ofstream* file) : file_(file) {}

  void emit(const ordered_json& record) {
    lines.push_back(record.dump());
    if (file_) *file_ << lines.back() << '\n';
  }

  // Logs calls made since the last flush.
  void flush_calls(const SearchState& state) {
    const auto calls = state.props().calls();
    for (; logged_calls_ < calls.size(); ++logged_calls_) emit(call_json(calls[logged_calls_]));
  }

  std::vector<std::string> lines;

 private:
  std::ofstream* file_;
  std::size_t logged_calls_ = 0;
};

std::vector<std::pair<std::string, std::string>> context_edges(const AnchorContext& ctx, const TransferGraph& graph) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto& members = ctx.members();
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (graph.has_edge(members[i], members[j])) {
        out.emplace_back(graph.node(members[i]).repr, graph.node(members[j]).repr);
      }
    }
  }
  return out;
}

}  // namespace

RunResult run(const RunConfig& config) {
  config.validate();
  Components parts = build(config);
  const auto seeds = load_seeds(config, *parts.domain);

  RunResult result;
  try {
    result.state = SearchState::init(seeds.molecules, seeds.edges, BudgetLedger{config.budget, 0, config.early_stop},
                                     config.normalizer);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, std::string("seed graph: ") + e.what());
  }
  SearchState& state = result.state;

  std::ofstream log_file;
  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    log_file.open(std::filesystem::path(config.out_dir) / "run_log.jsonl", std::ios::binary);
    if (!log_file) throw Error(ErrorCode::kIoError, "cannot write run log in " + config.out_dir);
  }
  RunLogger log(config.out_dir.empty() ? nullptr : &log_file);

  ordered_json domain_json;
  if (config.domain.external) {
    domain_json = {{"external", endpoint_to_json(config.domain.endpoint)}};
  } else {
    domain_json = {{"alphabet", config.domain.spec.alphabet}, {"length", config.domain.spec.length}};
  }
  log.emit({{"kind", "header"},
            {"format", "reachopt-run-log"},
            {"version", 1},
            {"seed", config.seed},
            {"ablation", to_string(config.ablation)},
            {"budget", config.budget},
            {"domain", domain_json},
            {"oracle", parts.oracle_label},
            {"metrics", metric_options_json(config.metric_options)}});
  for (const auto& rec : state.graph().nodes()) {
    log.emit({{"kind", "seed"}, {"id", rec.id.value}, {"molecule", rec.repr}});
  }

  auto anchor_rng = Rng::stream(config.seed, "anchor");
  auto generator_rng = Rng::stream(config.seed, "generator");
  EarlyStopper stopper(config.early_stop);

  evolve::TransitionParams tparams;
  tparams.tau = config.tau;
  tparams.frozen_graph = config.ablation == Ablation::kFrozenGraph;
  if (config.prefilter) tparams.prefilter = evolve::tanimoto_prefilter(config.domain.spec, *config.prefilter);

  std::string stop;
  auto stop_record = [&](const std::string& reason) {
    log.emit({{"kind", "iteration"},
              {"iteration", state.iteration()},
              {"budget_used", state.budget().used},
              {"top10", top_mean(state, 10)},
              {"top100", top_mean(state, 100)},
              {"stop_reason", reason}});
  };

  // Seeds are scored first, in id order, and charged to the budget.
  try {
    if (config.score_seeds) {
      for (const auto& rec : state.graph().nodes()) {
        if (state.budget().exhausted()) break;
        state.record_score(rec.id, parts.oracle->evaluate(rec.repr), 0);
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kOracleFailure) throw;
    stop = "oracle_failure";
  }
  log.flush_calls(state);
  if (!state.props().calls().empty()) stopper.update(top_mean(state, 100));
  if (stop.empty() && state.budget().exhausted()) stop = "budget";
  if (stop.empty() && config.max_iterations == 0) stop = "max_iterations";
  if (!stop.empty()) stop_record(stop);

  while (stop.empty()) {
    std::vector<AnchorContext> anchors;
    if (config.ablation == Ablation::kRandomAnchors) {
      anchors = anchor::random_anchors(state, config.anchor, anchor_rng);
    } else {
      const auto pool = anchor::beam_search(state, config.anchor, anchor_rng);
      anchors = anchor::select_anchors(pool, state, config.anchor);
    }
    state.update_trace(anchors);

    ordered_json anchor_keys = ordered_json::array();
    for (const auto& a : anchors) anchor_keys.push_back(a.key_string());

    evolve::TransitionReport report;
    try {
      std::vector<std::string> candidates;
      for (const auto& ctx : anchors) {
        generate::GeneratorRequest req;
        for (MoleculeId id : ctx.members()) req.context_members.push_back(state.graph().node(id).repr);
        req.context_edges = context_edges(ctx, state.graph());
        req.n = config.n_per_context;
        req.rng_seed = generator_rng.next();
        auto batch = parts.generator->generate(req);
        candidates.insert(candidates.end(), std::make_move_iterator(batch.begin()),
                          std::make_move_iterator(batch.end()));
      }
      report = evolve::transition(state, candidates, *parts.link, *parts.oracle, *parts.domain, tparams);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOracleFailure) throw;
      log.flush_calls(state);
      stop = "oracle_failure";
      log.emit({{"kind", "iteration"},
                {"iteration", state.current_pass()},
                {"anchors", anchor_keys},
                {"budget_used", state.budget().used},
                {"top10", top_mean(state, 10)},
                {"top100", top_mean(state, 100)},
                {"stop_reason", stop}});
      break;
    }

    log.flush_calls(state);
    for (const auto& ins : report.insertions) {
      ordered_json edges = ordered_json::array();
      for (MoleculeId u : ins.edges) edges.push_back(u.value);
      log.emit({{"kind", "insert"},
                {"iteration", report.iteration},
                {"id", ins.id.value},
                {"molecule", ins.molecule},
                {"edges", edges}});
    }

    const double top100 = top_mean(state, 100);
    const bool plateau = state.props().calls().empty() ? false : stopper.update(top100);
    if (state.budget().exhausted()) {
      stop = "budget";
    } else if (plateau) {
      stop = "early_stop";
    } else if (static_cast<std::size_t>(state.iteration()) >= config.max_iterations) {
      stop = "max_iterations";
    }

    ordered_json record = {{"kind", "iteration"},
                           {"iteration", report.iteration},
                           {"anchors", anchor_keys},
                           {"raw", report.raw},
                           {"retained", report.retained},
                           {"scored", report.scored},
                           {"oracle_calls", report.oracle_calls},
                           {"cache_hits", report.cache_hits},
                           {"inserted", report.inserted},
                           {"rejected_unconnected", report.rejected_unconnected},
                           {"rejected_invalid", report.rejected_invalid},
                           {"rejected_duplicate", report.rejected_duplicate},
                           {"deferred", report.deferred},
                           {"frozen_skipped", report.frozen_skipped},
                           {"budget_used", state.budget().used},
                           {"top10", top_mean(state, 10)},
                           {"top100", top100},
                           {"stall", stopper.stall()}};
    if (!stop.empty()) record["stop_reason"] = stop;
    log.emit(record);
  }

  result.stop_reason = stop;
  result.iterations = state.iteration();

  const auto input = metrics::metric_input(state);
  const DomainAdapter& domain = *parts.domain;
  result.report = metrics::compute_report(
      input, [&](std::string_view a, std::string_view b) { return domain.related(a, b); }, config.metric_options);
  result.log_lines = std::move(log.lines);

  if (!config.out_dir.empty()) {
    log_file.close();
    const std::filesystem::path dir(config.out_dir);
    std::ofstream(dir / "metrics.json", std::ios::binary) << report_text(result.report);
    std::ofstream checkpoint(dir / "checkpoint.jsonl", std::ios::binary);
    write_checkpoint(state, checkpoint);
    std::ofstream dist(dir / "distribution.tsv", std::ios::binary);
    const auto scores = metrics::generated_scores(state);
    write_distribution(scores.empty() ? std::vector<metrics::HistogramRow>{} : metrics::export_distribution(scores),
                       dist);
  }
  return result;
}

}  // namespace reachopt::driver
