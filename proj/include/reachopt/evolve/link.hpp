#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reachopt/domain.hpp"
#include "reachopt/rng.hpp"
#include "reachopt/synth/domain.hpp"

namespace reachopt::evolve {

// Probability that two molecules are one local transformation apart.
// Implementations are symmetric and deterministic.
class LinkScorer {
 public:
  virtual ~LinkScorer() = default;
  virtual double score(std::string_view a, std::string_view b) const = 0;
};

// 1.0 iff the domain relation holds. Throws InvalidMolecule on invalid input.
double exact_link_oracle(std::string_view a, std::string_view b, const DomainAdapter& domain);

class ExactLinkScorer final : public LinkScorer {
 public:
  explicit ExactLinkScorer(const DomainAdapter& domain) : domain_(domain) {}
  double score(std::string_view a, std::string_view b) const override { return exact_link_oracle(a, b, domain_); }

 private:
  const DomainAdapter& domain_;
};

inline constexpr std::size_t kLinkFeatureCount = 3;
using LinkFeatures = std::array<double, kLinkFeatureCount>;

// Feature order is fixed: tanimoto of positional 2-gram fingerprints,
// shared 3-mer fraction (position-free multiset overlap), length-difference
// indicator. All symmetric in (a, b).
inline constexpr std::array<std::string_view, kLinkFeatureCount> kLinkFeatureNames = {
    "tanimoto", "shared_kmer", "length_diff"};

LinkFeatures link_features(std::string_view a, std::string_view b, const synth::DomainSpec& spec);

// Logistic model over link_features.
class FeatureLinkModel final : public LinkScorer {
 public:
  explicit FeatureLinkModel(synth::DomainSpec spec);

  double score(std::string_view a, std::string_view b) const override;
  double logit(const LinkFeatures& f) const;
  double probability(const LinkFeatures& f) const;

  LinkFeatures weights{};
  double bias = 0.0;
  double threshold = 0.5;

  const synth::DomainSpec& spec() const { return spec_; }

  // Flat text record: "feature <name> <w>" lines, then "bias", "threshold".
  void save(std::ostream& out) const;
  // Throws IoError.
  static FeatureLinkModel load(std::istream& in, synth::DomainSpec spec);

 private:
  synth::DomainSpec spec_;
};

using Pair = std::pair<std::string, std::string>;

struct LabeledPair {
  std::string a;
  std::string b;
  double label = 0.0;
};

// Summed binary cross-entropy.
double bce_loss(const FeatureLinkModel& model, const std::vector<LabeledPair>& data);

struct TrainOptions {
  enum class Optimizer { kAdam, kSgd };

  std::size_t epochs = 80;
  double learning_rate = 1e-3;
  double weight_decay = 1e-5;
  Optimizer optimizer = Optimizer::kAdam;
  std::size_t batch_size = 8;  // 0 = full batch
  bool resample_negatives = true;
};

struct TrainResult {
  FeatureLinkModel model;
  std::vector<double> epoch_loss;  // mean BCE per pair, one entry per epoch
};

// BCE training with 1:1 uniformly sampled non-edge negatives among
// graph_nodes, resampled every epoch unless disabled.
// Throws InvalidArgument (no positives, unknown endpoint) or DegenerateData
// (no non-edge pair exists).
TrainResult train_link_model(const std::vector<Pair>& positives, const std::vector<std::string>& graph_nodes,
                             const synth::DomainSpec& spec, const TrainOptions& options, Rng& rng);

// n uniformly drawn non-edge pairs among nodes. Throws DegenerateData.
std::vector<Pair> sample_negatives(const std::vector<Pair>& positives, const std::vector<std::string>& nodes,
                                   std::size_t n, Rng& rng);

struct LinkEvaluation {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

LinkEvaluation evaluate_links(const LinkScorer& scorer, const std::vector<Pair>& positives,
                              const std::vector<Pair>& negatives, double threshold);

struct LinkBenchmark {
  TrainResult training;
  LinkEvaluation validation;
  LinkEvaluation test;
  std::size_t train_nodes = 0;
  std::size_t validation_nodes = 0;
  std::size_t test_nodes = 0;
};

// Held-out protocol: nodes split 80/10/10 at random; an edge belongs to a
// split only if both ends do; evaluation negatives are drawn 1:1 inside each
// split's node set.
LinkBenchmark run_link_benchmark(const std::vector<std::string>& nodes, const std::vector<Pair>& edges,
                                 const synth::DomainSpec& spec, const TrainOptions& options, Rng& rng);

}  // namespace reachopt::evolve
