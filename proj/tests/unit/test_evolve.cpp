#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "reachopt/error.hpp"
#include "reachopt/evolve/critique.hpp"
#include "reachopt/evolve/link.hpp"
#include "reachopt/evolve/transition.hpp"
#include "reachopt/rng.hpp"
#include "reachopt/synth/domain.hpp"

using namespace reachopt;
using namespace reachopt::evolve;

namespace {

const synth::DomainSpec kSpec4{"ABCD", 4};
const synth::DomainSpec kSpec8{"ABCD", 8};

SearchState state_of(std::vector<std::string> seeds, std::size_t budget = 100) {
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = i + 1; j < seeds.size(); ++j) {
      if (synth::hamming(seeds[i], seeds[j]) == 1) edges.emplace_back(seeds[i], seeds[j]);
    }
  }
  return SearchState::init(seeds, edges, BudgetLedger{budget, 0, {}});
}

// Constant score for every pair; used to pin the threshold behaviour.
class FixedScorer final : public LinkScorer {
 public:
  explicit FixedScorer(double v) : v_(v) {}
  double score(std::string_view, std::string_view) const override { return v_; }

 private:
  double v_;
};

// Counts calls so tests can check the budget accounting.
class CountingOracle final : public Oracle {
 public:
  double evaluate(const std::string& m) override {
    ++calls;
    return synth::score_hidden_target(m, "ABCD", kSpec4);
  }
  int calls = 0;
};

std::vector<Pair> hamming_edges(const std::vector<std::string>& nodes, const synth::DomainSpec& spec) {
  return synth::derive_edges(nodes, spec);
}

}  // namespace

TEST_CASE("critique") {
  const synth::SynthDomain domain(kSpec4);
  auto empty = state_of({"DDDD"});
  const auto r = critique({"AA#A", "AAAA", "AAAA"}, empty, domain);
  CHECK(r.retained == std::vector<std::string>{"AAAA"});
  CHECK(r.rejected == std::vector<Rejection>{{"AA#A", RejectReason::kInvalid},
                                             {"AAAA", RejectReason::kDuplicateInBatch}});
  const auto in_graph = critique({"DDDD", "ABCD"}, empty, domain);
  CHECK(in_graph.retained == std::vector<std::string>{"ABCD"});
  CHECK(in_graph.rejected == std::vector<Rejection>{{"DDDD", RejectReason::kAlreadyInGraph}});
  CHECK(critique({}, empty, domain).retained.empty());
  CHECK(to_string(RejectReason::kDuplicateInBatch) == "duplicate_in_batch");
}

TEST_CASE("exact link oracle") {
  const synth::SynthDomain domain(kSpec4);
  CHECK(exact_link_oracle("AAAA", "AABA", domain) == 1.0);
  CHECK(exact_link_oracle("AAAA", "ABBA", domain) == 0.0);
  CHECK(exact_link_oracle("AAAA", "AAAA", domain) == 0.0);
  CHECK_THROWS_AS(exact_link_oracle("AAAA", "AA#A", domain), Error);
}

TEST_CASE("property: scorers are exactly symmetric") {
  Rng rng(4);
  FeatureLinkModel model(kSpec8);
  model.weights = {3.0, -1.5, 0.25};
  model.bias = -0.75;
  const synth::SynthDomain domain(kSpec8);
  const ExactLinkScorer exact(domain);
  for (int i = 0; i < 1000; ++i) {
    const auto a = synth::random_molecule(kSpec8, rng);
    const auto b = synth::random_molecule(kSpec8, rng);
    CHECK(model.score(a, b) == model.score(b, a));
    CHECK(exact.score(a, b) == exact.score(b, a));
  }
}

TEST_CASE("untrained model BCE on one positive and one negative is 2 ln 2") {
  const FeatureLinkModel model(kSpec4);
  const std::vector<LabeledPair> data{{"AAAA", "AABA", 1.0}, {"AAAA", "DDDD", 0.0}};
  CHECK(bce_loss(model, data) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("model save and load") {
  FeatureLinkModel model(kSpec8);
  model.weights = {1.25, -0.5, 0.125};
  model.bias = -2.0;
  model.threshold = 0.4;
  std::stringstream buf;
  model.save(buf);
  CHECK(buf.str().find("feature tanimoto") != std::string::npos);
  const auto back = FeatureLinkModel::load(buf, kSpec8);
  CHECK(back.weights == model.weights);
  CHECK(back.bias == model.bias);
  CHECK(back.threshold == model.threshold);
  std::stringstream bad("feature nonsense 1\n");
  CHECK_THROWS_AS(FeatureLinkModel::load(bad, kSpec8), Error);
}

TEST_CASE("training errors") {
  Rng rng(0);
  CHECK_THROWS_AS(train_link_model({}, {"AAAA"}, kSpec4, {}, rng), Error);
  CHECK_THROWS_AS(train_link_model({{"AAAA", "AAAB"}}, {"AAAA"}, kSpec4, {}, rng), Error);
  // Two nodes joined by their only possible pair leave no negative.
  try {
    train_link_model({{"AAAA", "AAAB"}}, {"AAAA", "AAAB"}, kSpec4, {}, rng);
    FAIL("expected DegenerateData");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateData);
  }
}

TEST_CASE("negative sampling draws non-edges only") {
  Rng rng(3);
  Rng g(12);
  const auto series = synth::analogue_series(kSpec8, {3, 10, 3}, g);
  const auto pos = hamming_edges(series.molecules, kSpec8);
  const auto neg = sample_negatives(pos, series.molecules, 50, rng);
  CHECK(neg.size() == 50);
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& [a, b] : pos) {
    edges.emplace(a, b);
    edges.emplace(b, a);
  }
  for (const auto& [a, b] : neg) {
    CHECK(a != b);
    CHECK_FALSE(edges.contains({a, b}));
  }
}

TEST_CASE("property: full-batch descent on fixed data never raises the loss") {
  Rng g(2);
  const auto series = synth::analogue_series(kSpec8, {4, 12, 3}, g);
  TrainOptions opt;
  opt.optimizer = TrainOptions::Optimizer::kSgd;
  opt.batch_size = 0;
  opt.resample_negatives = false;
  opt.learning_rate = 0.05;
  opt.weight_decay = 0.0;
  opt.epochs = 60;
  Rng rng(9);
  const auto result = train_link_model(hamming_edges(series.molecules, kSpec8), series.molecules, kSpec8, opt, rng);
  REQUIRE(result.epoch_loss.size() == 60);
  for (std::size_t i = 1; i < result.epoch_loss.size(); ++i) {
    CHECK(result.epoch_loss[i] <= result.epoch_loss[i - 1] + 1e-12);
  }
  CHECK(result.epoch_loss.back() < std::log(2.0));
}

TEST_CASE("a trained model ranks positives above negatives") {
  Rng g(5);
  const auto series = synth::analogue_series(kSpec8, {6, 40, 3}, g);
  const auto pos = hamming_edges(series.molecules, kSpec8);
  Rng rng(6);
  const auto result = train_link_model(pos, series.molecules, kSpec8, TrainOptions{}, rng);
  // Empirical AUC against exact labels on fresh random pairs.
  const auto neg = sample_negatives(pos, series.molecules, 400, rng);
  std::size_t wins = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < 400; ++i) {
    const auto& p = pos[rng.uniform_index(pos.size())];
    const auto& n = neg[i];
    wins += result.model.score(p.first, p.second) > result.model.score(n.first, n.second);
    ++total;
  }
  CHECK(static_cast<double>(wins) / static_cast<double>(total) >= 0.95);
}

TEST_CASE("link evaluation counts") {
  const synth::SynthDomain domain(kSpec4);
  const ExactLinkScorer exact(domain);
  const std::vector<Pair> pos{{"AAAA", "AAAB"}, {"AAAA", "ABCD"}};
  const std::vector<Pair> neg{{"AAAA", "DDDD"}, {"AAAA", "AAAC"}};
  const auto ev = evaluate_links(exact, pos, neg, 0.5);
  CHECK(ev.accuracy == 0.5);
  CHECK(ev.precision == 0.5);
  CHECK(ev.recall == 0.5);
  CHECK(ev.f1 == 0.5);
}

TEST_CASE("predict_insert_edges") {
  const synth::SynthDomain domain(kSpec4);
  const ExactLinkScorer exact(domain);
  auto s = state_of({"AAAA", "BBBB"});
  const auto e = predict_insert_edges({"AABA"}, s, exact, 0.5);
  CHECK(e.at("AABA") == std::vector<MoleculeId>{MoleculeId{0}});
  const FixedScorer capped(0.98);
  CHECK(predict_insert_edges({"AABA", "BBBA"}, s, capped, 0.99).at("BBBA").empty());
  CHECK(predict_insert_edges({"AABA"}, s, exact, 0.5, tanimoto_prefilter(kSpec4, 1.01)).at("AABA").empty());
  CHECK_THROWS_AS(predict_insert_edges({"AABA"}, s, exact, 1.0), Error);
  CHECK_THROWS_AS(predict_insert_edges({"AABA"}, s, exact, 0.0), Error);
}

TEST_CASE("property: raising tau never adds edges") {
  Rng rng(8);
  FeatureLinkModel model(kSpec8);
  model.weights = {6.0, 2.0, 0.0};
  model.bias = -3.0;
  Rng g(1);
  const auto series = synth::analogue_series(kSpec8, {3, 8, 3}, g);
  auto s = SearchState::init(series.molecules, series.edges, BudgetLedger{10, 0, {}});
  std::vector<std::string> batch;
  for (int i = 0; i < 30; ++i) batch.push_back(synth::random_molecule(kSpec8, rng));
  for (double lo = 0.05; lo < 0.9; lo += 0.1) {
    const auto a = predict_insert_edges(batch, s, model, lo);
    const auto b = predict_insert_edges(batch, s, model, lo + 0.05);
    for (const auto& [x, ids] : b) {
      const auto& wider = a.at(x);
      CHECK(std::includes(wider.begin(), wider.end(), ids.begin(), ids.end()));
    }
  }
}

TEST_CASE("transition") {
  const synth::SynthDomain domain(kSpec4);
  const ExactLinkScorer exact(domain);
  SUBCASE("empty batch") {
    auto s = state_of({"AAAA"});
    CountingOracle oracle;
    const auto r = transition(s, {}, exact, oracle, domain, {});
    CHECK(r.retained == 0);
    CHECK(r.scored == 0);
    CHECK(r.inserted == 0);
    CHECK(s.iteration() == 1);
  }
  SUBCASE("one connectable candidate") {
    auto s = state_of({"AAAA"});
    CountingOracle oracle;
    const auto r = transition(s, {"AAAB"}, exact, oracle, domain, {});
    CHECK(r.retained == 1);
    CHECK(r.scored == 1);
    CHECK(r.inserted == 1);
    CHECK(r.iteration == 1);
    CHECK(oracle.calls == 1);
    CHECK(s.graph().node(r.insertions[0].id).generated_at == 1);
    CHECK(s.props().calls()[0].iteration == 1);
  }
  SUBCASE("unconnectable candidates are scored and logged") {
    auto s = state_of({"AAAA"});
    CountingOracle oracle;
    const auto r = transition(s, {"DDDD", "AAAB"}, exact, oracle, domain, {});
    CHECK(r.scored == 2);
    CHECK(r.inserted == 1);
    CHECK(r.rejected_unconnected == 1);
    CHECK(s.rejected().size() == 1);
    CHECK(s.budget().used == 2);
  }
  SUBCASE("budget cut defers the rest") {
    auto s = state_of({"AAAA"}, 2);
    CountingOracle oracle;
    const auto r = transition(s, {"AAAB", "AAAC", "AAAD"}, exact, oracle, domain, {});
    CHECK(r.oracle_calls == 2);
    CHECK(r.deferred == 1);
    CHECK(r.budget_exhausted);
    CHECK(r.retained == r.inserted + r.rejected_unconnected + r.deferred);
  }
  SUBCASE("cached scores cost nothing") {
    auto s = state_of({"AAAA"});
    s.record_candidate_score("AAAB", 0.25, 0);
    CountingOracle oracle;
    const auto r = transition(s, {"AAAB"}, exact, oracle, domain, {});
    CHECK(r.cache_hits == 1);
    CHECK(oracle.calls == 0);
    CHECK(r.inserted == 1);
  }
  SUBCASE("frozen graph scores without inserting") {
    auto s = state_of({"AAAA"});
    CountingOracle oracle;
    TransitionParams p;
    p.frozen_graph = true;
    const auto r = transition(s, {"AAAB", "AAAC"}, exact, oracle, domain, p);
    CHECK(r.inserted == 0);
    CHECK(r.scored == 2);
    CHECK(r.frozen_skipped == 2);
    CHECK(s.graph().node_count() == 1);
  }
}

TEST_CASE("property: transitions conserve candidates and keep the graph reachable") {
  const synth::SynthDomain domain(kSpec8);
  const ExactLinkScorer exact(domain);
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    Rng g(trial);
    const auto series = synth::analogue_series(kSpec8, {2, 6, 3}, g);
    auto s = SearchState::init(series.molecules, series.edges, BudgetLedger{60, 0, {}});
    synth::HiddenTargetOracle oracle(kSpec8, synth::random_molecule(kSpec8, rng));
    for (int pass = 0; pass < 8; ++pass) {
      std::vector<std::string> batch;
      for (int i = 0; i < 12; ++i) {
        std::string m = s.graph().node(MoleculeId{static_cast<std::uint32_t>(rng.uniform_index(s.graph().node_count()))}).repr;
        m[rng.uniform_index(8)] = "ABCD#"[rng.uniform_index(5)];
        batch.push_back(m);
      }
      const auto r = transition(s, batch, exact, oracle, domain, {});
      CHECK(r.retained == r.inserted + r.rejected_unconnected + r.deferred);
      CHECK(r.raw == r.retained + r.rejected_invalid + r.rejected_duplicate);
    }
    CHECK(s.budget().used <= 60);
    for (const auto& rec : s.graph().nodes()) {
      if (rec.is_seed()) continue;
      CHECK(s.is_reachable(rec.id));
      bool valid_edge = false;
      for (auto u : s.graph().neighbors(rec.id)) valid_edge = valid_edge || synth::related(rec.repr, s.graph().node(u).repr, kSpec8);
      CHECK(valid_edge);
    }
  }
}
