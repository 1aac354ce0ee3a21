#include "reachopt/driver/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "reachopt/driver/config.hpp"
#include "reachopt/driver/conformance.hpp"
#include "reachopt/driver/protocol.hpp"
#include "reachopt/driver/run.hpp"
#include "reachopt/driver/server.hpp"
#include "reachopt/error.hpp"
#include "reachopt/evolve/link.hpp"
#include "reachopt/rng.hpp"
#include "reachopt/synth/domain.hpp"

namespace reachopt::driver {

namespace {

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string ablation;
};

int do_run(const RunArgs& args) {
  RunConfig cfg = load_config(args.config);
  if (args.seed) cfg.seed = *args.seed;
  if (!args.out.empty()) cfg.out_dir = args.out;
  if (!args.ablation.empty()) cfg.ablation = parse_ablation(args.ablation);
  cfg.validate();
  const RunResult result = run(cfg);
  std::cout << report_text(result.report);
  std::cerr << "stop_reason " << result.stop_reason << " after " << result.iterations << " iterations, "
            << result.state.budget().used << " oracle calls\n";
  return result.stop_reason == "oracle_failure" ? 1 : 0;
}

RunLog open_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  return read_run_log(in);
}

int do_metrics(const std::string& log_path, const std::string& config_path) {
  std::optional<RunConfig> cfg;
  if (!config_path.empty()) cfg = load_config(config_path);
  std::cout << report_text(replay_metrics(open_log(log_path), cfg));
  return 0;
}

int do_export(const std::string& log_path, const std::string& out_path) {
  const RunLog log = open_log(log_path);
  std::vector<metrics::HistogramRow> rows;
  if (!log.generated_normalized.empty()) rows = metrics::export_distribution(log.generated_normalized);
  if (out_path.empty()) {
    write_distribution(rows, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + out_path);
    write_distribution(rows, out);
  }
  return 0;
}

struct TrainArgs {
  std::string seeds_file;
  std::string edges_file;
  synth::DomainSpec spec;
  synth::SeriesOptions series{10, 50, 3};
  std::uint64_t seed = 0;
  evolve::TrainOptions options;
  std::string model_out;
};

std::vector<std::string> lines_of(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() != '#') out.push_back(line);
  }
  return out;
}

nlohmann::ordered_json evaluation_json(const evolve::LinkEvaluation& e) {
  return {{"accuracy", e.accuracy}, {"f1", e.f1},           {"precision", e.precision},
          {"recall", e.recall},     {"positives", e.positives}, {"negatives", e.negatives}};
}

int do_train(const TrainArgs& args) {
  args.spec.validate();
  synth::SeedGraph graph;
  if (args.seeds_file.empty()) {
    auto rng = Rng::stream(args.seed, "seeds");
    graph = synth::analogue_series(args.spec, args.series, rng);
  } else {
    for (const auto& m : lines_of(args.seeds_file)) graph.molecules.push_back(synth::canonicalize(m, args.spec));
    if (args.edges_file.empty()) {
      graph.edges = synth::derive_edges(graph.molecules, args.spec);
    } else {
      for (const auto& line : lines_of(args.edges_file)) {
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw Error(ErrorCode::kConfigError, "edge line without a tab: '" + line + "'");
        graph.edges.emplace_back(synth::canonicalize(line.substr(0, tab), args.spec),
                                 synth::canonicalize(line.substr(tab + 1), args.spec));
      }
    }
  }
  auto rng = Rng::stream(args.seed, "negatives");
  const auto bench = evolve::run_link_benchmark(graph.molecules, graph.edges, args.spec, args.options, rng);
  if (!args.model_out.empty()) {
    std::ofstream out(args.model_out);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + args.model_out);
    bench.training.model.save(out);
  }
  nlohmann::ordered_json report = evaluation_json(bench.test);
  report["validation"] = evaluation_json(bench.validation);
  report["nodes"] = {{"train", bench.train_nodes}, {"validation", bench.validation_nodes}, {"test", bench.test_nodes}};
  report["final_loss"] = bench.training.epoch_loss.empty() ? 0.0 : bench.training.epoch_loss.back();
  std::cout << report.dump(2) << "\n";
  return 0;
}

struct ServeArgs {
  synth::DomainSpec spec;
  std::string oracle = "hidden_target";
  std::string target;
  std::size_t k = 2;
  std::uint64_t nk_seed = 0;
  double value = 0.5;
  std::uint64_t seed = 0;
  std::optional<int> port;
  std::size_t max_connections = 0;
};

int do_serve(const ServeArgs& args) {
  args.spec.validate();
  std::unique_ptr<Oracle> oracle;
  if (args.oracle == "hidden_target") {
    std::string target = args.target;
    if (target.empty()) {
      auto rng = Rng::stream(args.seed, "target");
      target = synth::random_molecule(args.spec, rng);
    }
    oracle = std::make_unique<synth::HiddenTargetOracle>(args.spec, target);
  } else if (args.oracle == "nk") {
    oracle = std::make_unique<synth::NkOracle>(args.spec, synth::NkSpec{args.k, args.nk_seed});
  } else if (args.oracle == "constant") {
    oracle = std::make_unique<synth::ConstantOracle>(args.value);
  } else {
    throw Error(ErrorCode::kConfigError, "unknown oracle '" + args.oracle + "'");
  }
  ProtocolServer server(args.spec, std::move(oracle));
  if (args.port) {
    server.serve_tcp(
        *args.port, [](int port) { std::cerr << "listening " << port << std::endl; }, args.max_connections);
  } else {
    server.serve(std::cin, std::cout);
  }
  return 0;
}

struct ConformanceArgs {
  std::string corpus;
  std::vector<std::string> command;
  std::string host = "127.0.0.1";
  int port = 0;
  int timeout_ms = 10000;
  std::string valid = "ABCDABCD";
  std::string neighbor = "ABCDABCA";
  std::string invalid = "not-a-molecule";
};

int do_conformance(const ConformanceArgs& args) {
  ProtocolEndpoint ep;
  if (!args.command.empty()) {
    ep.transport = ProtocolEndpoint::Transport::kChildProcess;
    ep.command = args.command;
  } else {
    ep.transport = ProtocolEndpoint::Transport::kTcp;
    ep.host = args.host;
    ep.port = args.port;
  }
  ep.timeout_ms = args.timeout_ms;
  ep.validate();
  ProtocolClient client(ep);
  const auto results =
      run_conformance(client, args.corpus, {{"VALID", args.valid}, {"NEIGHBOR", args.neighbor}, {"INVALID", args.invalid}});
  std::size_t failed = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed) {
      std::cout << ": " << r.detail;
      ++failed;
    }
    std::cout << "\n";
  }
  std::cout << (results.size() - failed) << "/" << results.size() << " cases passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Reachability-constrained molecular optimization"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run the optimization loop");
  run_cmd->add_option("--config", run_args.config, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run_args.seed, "Master seed (overrides the config)");
  run_cmd->add_option("--out", run_args.out, "Output directory (overrides the config)");
  run_cmd->add_option("--ablation", run_args.ablation, "none|random_anchors|random_generator|frozen_graph")
      ->check(CLI::IsMember({"none", "random_anchors", "random_generator", "frozen_graph"}));

  std::string log_path;
  std::string metrics_config;
  auto* metrics_cmd = app.add_subcommand("metrics", "Recompute the metric report from a run log");
  metrics_cmd->add_option("--log", log_path, "run_log.jsonl")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("--config", metrics_config, "Run config (needed for external domains)")
      ->check(CLI::ExistingFile);

  std::string dist_log;
  std::string dist_out;
  auto* export_cmd = app.add_subcommand("export-dist", "Histogram of generated-molecule scores");
  export_cmd->add_option("--log", dist_log, "run_log.jsonl")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--out", dist_out, "Output TSV (default stdout)");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train-link", "Train and evaluate the feature link model");
  train_cmd->add_option("--seeds", train.seeds_file, "One molecule per line (default: synthetic series)")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--edges", train.edges_file, "Tab-separated edge pairs")->check(CLI::ExistingFile);
  train_cmd->add_option("--alphabet", train.spec.alphabet, "Synthetic alphabet");
  train_cmd->add_option("--length", train.spec.length, "Synthetic molecule length");
  train_cmd->add_option("--series", train.series.series, "Analogue series count");
  train_cmd->add_option("--per-series", train.series.per_series, "Members per series");
  train_cmd->add_option("--variable-sites", train.series.variable_sites, "Variable sites per series");
  train_cmd->add_option("--seed", train.seed, "Master seed");
  train_cmd->add_option("--epochs", train.options.epochs, "Training epochs");
  train_cmd->add_option("--lr", train.options.learning_rate, "Learning rate");
  train_cmd->add_option("--batch-size", train.options.batch_size, "Minibatch size (0 = full batch)");
  train_cmd->add_option("--model-out", train.model_out, "Where to write the trained model");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve-oracle", "Serve a builtin oracle over the wire protocol");
  serve_cmd->add_option("--oracle", serve.oracle, "hidden_target|nk|constant")
      ->check(CLI::IsMember({"hidden_target", "nk", "constant"}));
  serve_cmd->add_option("--target", serve.target, "Hidden target molecule");
  serve_cmd->add_option("--k", serve.k, "NK interaction order");
  serve_cmd->add_option("--nk-seed", serve.nk_seed, "NK landscape seed");
  serve_cmd->add_option("--value", serve.value, "Constant oracle value");
  serve_cmd->add_option("--alphabet", serve.spec.alphabet, "Synthetic alphabet");
  serve_cmd->add_option("--length", serve.spec.length, "Synthetic molecule length");
  serve_cmd->add_option("--seed", serve.seed, "Seed for a random target");
  serve_cmd->add_option("--port", serve.port, "Listen on TCP 127.0.0.1:PORT instead of stdio (0 = any)");
  serve_cmd->add_option("--max-connections", serve.max_connections, "Exit after this many connections");

  ConformanceArgs conf;
  auto* conf_cmd = app.add_subcommand("conformance", "Run the protocol conformance corpus against a peer");
  conf_cmd->add_option("--corpus", conf.corpus, "Corpus file")->required()->check(CLI::ExistingFile);
  conf_cmd->add_option("--host", conf.host, "TCP host");
  conf_cmd->add_option("--port", conf.port, "TCP port");
  conf_cmd->add_option("--timeout-ms", conf.timeout_ms, "Per-request timeout");
  conf_cmd->add_option("--valid", conf.valid, "A valid molecule");
  conf_cmd->add_option("--neighbor", conf.neighbor, "A molecule related to --valid");
  conf_cmd->add_option("--invalid", conf.invalid, "An invalid molecule");
  conf_cmd->add_option("command", conf.command, "Peer command line (after --)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*run_cmd) return do_run(run_args);
    if (*metrics_cmd) return do_metrics(log_path, metrics_config);
    if (*export_cmd) return do_export(dist_log, dist_out);
    if (*train_cmd) return do_train(train);
    if (*serve_cmd) return do_serve(serve);
    if (*conf_cmd) return do_conformance(conf);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace reachopt::driver
