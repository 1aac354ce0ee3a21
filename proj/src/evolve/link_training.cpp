#include <algorithm>
#include <cmath>
#include <set>

#include "reachopt/error.hpp"
#include "reachopt/evolve/link.hpp"

namespace reachopt::evolve {

namespace {

using PairKey = std::pair<std::string, std::string>;

PairKey ordered(std::string_view a, std::string_view b) {
  return a < b ? PairKey{a, b} : PairKey{b, a};
}

// log(1 + exp(-|z|)) form, stable for large |z|.
double bce_from_logit(double z, double y) { return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z))); }

struct Example {
  LinkFeatures x;
  double y;
};

}  // namespace

double bce_loss(const FeatureLinkModel& model, const std::vector<LabeledPair>& data) {
  double total = 0.0;
  for (const auto& p : data) total += bce_from_logit(model.logit(link_features(p.a, p.b, model.spec())), p.label);
  return total;
}

std::vector<Pair> sample_negatives(const std::vector<Pair>& positives, const std::vector<std::string>& nodes,
                                   std::size_t n, Rng& rng) {
  std::set<PairKey> edges;
  const std::set<std::string_view> node_set(nodes.begin(), nodes.end());
  for (const auto& [a, b] : positives) {
    if (node_set.contains(a) && node_set.contains(b)) edges.insert(ordered(a, b));
  }
  const std::size_t m = node_set.size();
  const std::size_t possible = m < 2 ? 0 : m * (m - 1) / 2;
  if (possible <= edges.size()) throw Error(ErrorCode::kDegenerateData, "no non-edge pair to sample as a negative");

  std::vector<Pair> out;
  out.reserve(n);
  std::size_t attempts = 0;
  const std::size_t max_attempts = 50 * n + 1000;
  while (out.size() < n && attempts++ < max_attempts) {
    const auto& a = nodes[rng.uniform_index(nodes.size())];
    const auto& b = nodes[rng.uniform_index(nodes.size())];
    if (a == b || edges.contains(ordered(a, b))) continue;
    out.emplace_back(a, b);
  }
  if (out.size() < n) {
    // Dense node sets: enumerate the complement and draw from it.
    std::vector<Pair> complement;
    const std::vector<std::string_view> uniq(node_set.begin(), node_set.end());
    for (std::size_t i = 0; i < uniq.size(); ++i) {
      for (std::size_t j = i + 1; j < uniq.size(); ++j) {
        if (!edges.contains(ordered(uniq[i], uniq[j]))) complement.emplace_back(uniq[i], uniq[j]);
      }
    }
    while (out.size() < n) out.push_back(complement[rng.uniform_index(complement.size())]);
  }
  return out;
}

TrainResult train_link_model(const std::vector<Pair>& positives, const std::vector<std::string>& graph_nodes,
                             const synth::DomainSpec& spec, const TrainOptions& options, Rng& rng) {
  if (positives.empty()) throw Error(ErrorCode::kInvalidArgument, "link training needs at least one positive edge");
  const std::set<std::string_view> node_set(graph_nodes.begin(), graph_nodes.end());
  for (const auto& [a, b] : positives) {
    if (!node_set.contains(a) || !node_set.contains(b)) {
      throw Error(ErrorCode::kInvalidArgument, "positive edge (" + a + ", " + b + ") leaves the node set");
    }
  }

  TrainResult result{FeatureLinkModel(spec), {}};
  FeatureLinkModel& model = result.model;

  std::vector<Example> pos;
  pos.reserve(positives.size());
  for (const auto& [a, b] : positives) pos.push_back({link_features(a, b, spec), 1.0});

  auto make_negatives = [&] {
    std::vector<Example> neg;
    for (const auto& [a, b] : sample_negatives(positives, graph_nodes, positives.size(), rng)) {
      neg.push_back({link_features(a, b, spec), 0.0});
    }
    return neg;
  };

  constexpr std::size_t kParams = kLinkFeatureCount + 1;  // weights then bias
  std::array<double, kParams> m1{};
  std::array<double, kParams> m2{};
  std::size_t step = 0;
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;

  std::vector<Example> neg = make_negatives();
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    if (epoch > 0 && options.resample_negatives) neg = make_negatives();
    std::vector<const Example*> data;
    data.reserve(pos.size() + neg.size());
    for (const auto& e : pos) data.push_back(&e);
    for (const auto& e : neg) data.push_back(&e);
    if (options.batch_size != 0) rng.shuffle(data);
    const std::size_t batch = options.batch_size == 0 ? data.size() : options.batch_size;

    for (std::size_t start = 0; start < data.size(); start += batch) {
      const std::size_t end = std::min(data.size(), start + batch);
      std::array<double, kParams> grad{};
      for (std::size_t i = start; i < end; ++i) {
        const double err = model.probability(data[i]->x) - data[i]->y;
        for (std::size_t j = 0; j < kLinkFeatureCount; ++j) grad[j] += err * data[i]->x[j];
        grad[kLinkFeatureCount] += err;
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (std::size_t j = 0; j < kParams; ++j) grad[j] *= scale;
      for (std::size_t j = 0; j < kLinkFeatureCount; ++j) grad[j] += options.weight_decay * model.weights[j];

      ++step;
      for (std::size_t j = 0; j < kParams; ++j) {
        double update = grad[j];
        if (options.optimizer == TrainOptions::Optimizer::kAdam) {
          m1[j] = kBeta1 * m1[j] + (1.0 - kBeta1) * grad[j];
          m2[j] = kBeta2 * m2[j] + (1.0 - kBeta2) * grad[j] * grad[j];
          const double mhat = m1[j] / (1.0 - std::pow(kBeta1, static_cast<double>(step)));
          const double vhat = m2[j] / (1.0 - std::pow(kBeta2, static_cast<double>(step)));
          update = mhat / (std::sqrt(vhat) + kEps);
        }
        double& param = j < kLinkFeatureCount ? model.weights[j] : model.bias;
        param -= options.learning_rate * update;
      }
    }

    double loss = 0.0;
    for (const auto* e : data) loss += bce_from_logit(model.logit(e->x), e->y);
    result.epoch_loss.push_back(loss / static_cast<double>(data.size()));
  }
  return result;
}

LinkEvaluation evaluate_links(const LinkScorer& scorer, const std::vector<Pair>& positives,
                              const std::vector<Pair>& negatives, double threshold) {
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const auto& [a, b] : positives) tp += scorer.score(a, b) > threshold;
  for (const auto& [a, b] : negatives) fp += scorer.score(a, b) > threshold;
  LinkEvaluation ev;
  ev.positives = positives.size();
  ev.negatives = negatives.size();
  const std::size_t fn = positives.size() - tp;
  const std::size_t tn = negatives.size() - fp;
  const std::size_t total = positives.size() + negatives.size();
  if (total > 0) ev.accuracy = static_cast<double>(tp + tn) / static_cast<double>(total);
  if (tp + fp > 0) ev.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) ev.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (ev.precision + ev.recall > 0) ev.f1 = 2.0 * ev.precision * ev.recall / (ev.precision + ev.recall);
  return ev;
}

LinkBenchmark run_link_benchmark(const std::vector<std::string>& nodes, const std::vector<Pair>& edges,
                                 const synth::DomainSpec& spec, const TrainOptions& options, Rng& rng) {
  std::vector<std::string> shuffled = nodes;
  rng.shuffle(shuffled);
  const std::size_t n_train = shuffled.size() * 8 / 10;
  const std::size_t n_val = shuffled.size() / 10;

  std::vector<std::string> train(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::string> val(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train),
                               shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  std::vector<std::string> test(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), shuffled.end());

  auto split_edges = [&](const std::vector<std::string>& part) {
    const std::set<std::string_view> members(part.begin(), part.end());
    std::vector<Pair> out;
    for (const auto& e : edges) {
      if (members.contains(e.first) && members.contains(e.second)) out.push_back(e);
    }
    return out;
  };
  const auto train_pos = split_edges(train);
  const auto val_pos = split_edges(val);
  const auto test_pos = split_edges(test);

  LinkBenchmark bench{train_link_model(train_pos, train, spec, options, rng), {}, {}, train.size(), val.size(),
                      test.size()};
  const double tau = bench.training.model.threshold;
  if (!val_pos.empty()) {
    bench.validation = evaluate_links(bench.training.model, val_pos, sample_negatives(val_pos, val, val_pos.size(), rng), tau);
  }
  if (!test_pos.empty()) {
    bench.test = evaluate_links(bench.training.model, test_pos, sample_negatives(test_pos, test, test_pos.size(), rng), tau);
  }
  return bench;
}

}  // namespace reachopt::evolve
