#include <cmath>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "reachopt/anchor/anchor.hpp"
#include "reachopt/error.hpp"

using namespace reachopt;
using namespace reachopt::anchor;
using fixtures::score_all;

namespace {

MoleculeId id(std::uint32_t v) { return MoleculeId{v}; }

AnchorContext ctx(std::initializer_list<std::uint32_t> ids) {
  std::vector<MoleculeId> m;
  for (auto v : ids) m.push_back(id(v));
  return AnchorContext(m);
}

std::vector<std::string> keys(const std::vector<AnchorContext>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.key_string());
  return out;
}

// Selects each context once in its own pass, to build up usage and recency.
void touch(SearchState& s, const std::vector<AnchorContext>& cs) {
  for (const auto& c : cs) {
    const std::vector<AnchorContext> one{c};
    s.update_trace(one);
    s.advance_iteration();
  }
}

}  // namespace

TEST_CASE("property score") {
  const AnchorParams p;
  auto s = fixtures::state_from(2, {{0, 1}});
  CHECK(property_score(ctx({0, 1}), s, p) == doctest::Approx(-0.5).epsilon(1e-12));
  s.record_score(id(0), 0.8, 0);
  CHECK(property_score(ctx({0, 1}), s, p) == doctest::Approx(0.8 / (1 + 1e-8) - 0.25).epsilon(1e-12));
  CHECK(std::abs(property_score(ctx({0, 1}), s, p) - 0.55) < 1e-7);
  s.record_score(id(1), 0.6, 0);
  CHECK(std::abs(property_score(ctx({0, 1}), s, p) - 0.7) < 1e-7);
}

TEST_CASE("exploration score") {
  auto s = fixtures::state_from(2, {{0, 1}});
  CHECK(exploration_score(ctx({0, 1}), s.trace()) == 1.0);
  touch(s, {ctx({1}), ctx({1}), ctx({1})});
  CHECK(exploration_score(ctx({1}), s.trace()) == 0.5);
  CHECK(exploration_score(ctx({0, 1}), s.trace()) == 0.75);
}

TEST_CASE("repeat penalty") {
  const AnchorParams p;
  auto s = fixtures::state_from(2, {{0, 1}});
  CHECK(repeat_penalty(ctx({0}), s.trace(), s.current_pass(), p) == 0.0);
  SearchTrace t;
  t.resize(2);
  t.set(id(0), 0, 7);
  CHECK(repeat_penalty(ctx({0}), t, 7, p) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(repeat_penalty(ctx({0}), t, 12, p) == doctest::Approx(0.2 * std::exp(-1.0)).epsilon(1e-12));
  t.set(id(1), 3, std::nullopt);
  CHECK(repeat_penalty(ctx({1}), t, 12, p) == doctest::Approx(0.1 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("beam score composes the terms") {
  AnchorParams p;
  auto s = fixtures::state_from(2, {{0, 1}});
  score_all(s, {0.5, 0.5});
  CHECK(std::abs(beam_score(ctx({0, 1}), s, p) - 1.0) < 1e-7);

  SearchTrace t;
  t.resize(2);
  t.set(id(1), 3, std::nullopt);
  auto s2 = fixtures::state_from(2, {{0, 1}});
  score_all(s2, {0.5, 0.5});
  touch(s2, {ctx({1}), ctx({1}), ctx({1})});
  // Recency of member 1: t - rho = 1 after three touches.
  const double want =
      0.5 + 0.5 * 0.75 - 0.1 * std::log(4.0) / 2 - 0.2 * std::exp(-1.0 / 5.0) / 2;
  CHECK(std::abs(beam_score(ctx({0, 1}), s2, p) - want) < 1e-7);
  p.use_repeat_penalty = false;
  CHECK(std::abs(beam_score(ctx({0, 1}), s2, p) - (0.5 + 0.5 * 0.75)) < 1e-7);
}

TEST_CASE("beam score is monotone in an observed score") {
  const AnchorParams p;
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const double lo = rng.uniform01() * 0.5;
    auto a = fixtures::state_from(3, {{0, 1}, {1, 2}});
    auto b = fixtures::state_from(3, {{0, 1}, {1, 2}});
    score_all(a, {lo, 0.3, 0.9});
    score_all(b, {lo + 0.01 + rng.uniform01() * 0.4, 0.3, 0.9});
    CHECK(beam_score(ctx({0, 1, 2}), b, p) > beam_score(ctx({0, 1, 2}), a, p));
  }
}

TEST_CASE("beam search on a 3-path returns both edges") {
  AnchorParams p;
  p.context_size = 2;
  p.beam_width = 10;
  auto s = fixtures::path_state(3);
  score_all(s, {0.5, 0.5, 0.5});
  Rng rng(0);
  const auto out = beam_search(s, p, rng);
  CHECK(keys(out) == std::vector<std::string>{"0-1", "1-2"});
}

TEST_CASE("beam search on a 6-path enumerates every connected triple") {
  AnchorParams p;
  p.context_size = 3;
  p.beam_width = 4;
  auto s = fixtures::path_state(6);
  score_all(s, {0.1, 0.7, 0.3, 0.9, 0.2, 0.6});
  Rng rng(0);
  const auto out = beam_search(s, p, rng);
  auto expected = oracles::all_contexts(s, 3);
  REQUIRE(expected.size() == 4);
  std::sort(expected.begin(), expected.end(), [&](const auto& a, const auto& b) {
    const std::vector<MoleculeId> za(a.members().begin(), a.members().end());
    const std::vector<MoleculeId> zb(b.members().begin(), b.members().end());
    return oracles::beam(za, s, p) > oracles::beam(zb, s, p);
  });
  CHECK(keys(out) == keys(expected));
}

TEST_CASE("beam width one follows the greedy chain") {
  // Path 0-1-2-3-4-5. The best singleton is 4; the tie {3,4} vs {4,5} goes to
  // the smaller key; then {2,3,4} beats {3,4,5}. The true best triple is
  // {0,1,2}, which the width-one beam cannot reach.
  AnchorParams p;
  p.context_size = 3;
  p.beam_width = 1;
  auto s = fixtures::path_state(6);
  score_all(s, {0.9, 0.9, 0.9, 0.0, 1.0, 0.0});
  Rng rng(0);
  CHECK(keys(beam_search(s, p, rng)) == std::vector<std::string>{"2-3-4"});
  CHECK(oracles::beam_argmax(s, p)->key_string() == "0-1-2");
}

TEST_CASE("beam search saturates small components") {
  AnchorParams p;
  p.context_size = 4;
  auto s = fixtures::state_from(5, {{0, 1}, {2, 3}, {3, 4}});
  Rng rng(1);
  const auto out = beam_search(s, p, rng);
  std::set<std::string> got;
  for (const auto& c : out) {
    CHECK(is_connected(c, s.graph()));
    got.insert(c.key_string());
  }
  CHECK(got == std::set<std::string>{"0-1", "2-3-4"});
}

TEST_CASE("beam search errors") {
  SearchState empty;
  Rng rng(0);
  CHECK_THROWS_AS(beam_search(empty, AnchorParams{}, rng), Error);
  AnchorParams bad;
  bad.gamma = 0.0;
  auto s = fixtures::path_state(2);
  CHECK_THROWS_AS(beam_search(s, bad, rng), Error);
}

TEST_CASE("property: beam search top-1 equals the brute-force argmax") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(11);
    auto s = fixtures::state_from(n, fixtures::random_edges(n, 0.3, rng));
    for (std::uint32_t v = 0; v < n; ++v) {
      if (rng.uniform01() < 0.7) s.record_score(id(v), rng.uniform01(), 0);
    }
    for (int k = 0; k < 3; ++k) touch(s, {AnchorContext({id(static_cast<std::uint32_t>(rng.uniform_index(n)))})});
    AnchorParams p;
    p.context_size = 1 + rng.uniform_index(4);
    Rng beam_rng(trial);
    const auto out = beam_search(s, p, beam_rng);
    REQUIRE_FALSE(out.empty());
    CHECK(out.front() == *oracles::beam_argmax(s, p));
    for (const auto& c : out) CHECK(is_connected(c, s.graph()));
  }
}

TEST_CASE("select anchors") {
  AnchorParams p;
  p.batch_size = 2;
  SUBCASE("disjoint contexts pick the best two") {
    auto s = fixtures::state_from(3, {});
    score_all(s, {0.2, 0.9, 0.5});
    const std::vector<AnchorContext> pool{ctx({0}), ctx({1}), ctx({2})};
    CHECK(keys(select_anchors(pool, s, p)) == std::vector<std::string>{"1", "2"});
  }
  SUBCASE("overlap penalty skips a near duplicate") {
    // Base scores 1.0 / 0.9 / 0.7 with alpha 0 and all members observed.
    p.alpha = 0.0;
    auto s = fixtures::state_from(10, {});
    score_all(s, {1.0, 1.0, 1.0, 1.0, 0.9, 0.7, 0.7, 0.7, 0.7, 0.7});
    // Z1 = {0,1,2,3}; Z2 = {0,1,2,3,4} minus one... built so that J(Z1,Z2)=0.8.
    const auto z1 = ctx({0, 1, 2, 3});
    const auto z2 = ctx({0, 1, 2, 3, 4});
    const auto z3 = ctx({5, 6, 7, 8, 9});
    CHECK(jaccard(z1, z2) == doctest::Approx(0.8));
    CHECK(std::abs(base_rank_score(z1, s, p) - 1.0) < 1e-7);
    CHECK(std::abs(base_rank_score(z2, s, p) - 0.98) < 1e-7);
    CHECK(std::abs(base_rank_score(z3, s, p) - 0.7) < 1e-7);
    const std::vector<AnchorContext> pool{z2, z3, z1};
    CHECK(select_anchors(pool, s, p) == std::vector<AnchorContext>{z1, z3});
  }
  SUBCASE("ties go to the smaller key") {
    auto s = fixtures::state_from(3, {});
    const std::vector<AnchorContext> pool{ctx({2}), ctx({1}), ctx({0})};
    p.batch_size = 3;
    CHECK(keys(select_anchors(pool, s, p)) == std::vector<std::string>{"0", "1", "2"});
  }
  SUBCASE("empty pool") {
    auto s = fixtures::state_from(1, {});
    CHECK_THROWS_AS(select_anchors({}, s, p), Error);
  }
}

TEST_CASE("property: select anchors matches the brute-force greedy") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    auto s = fixtures::state_from(8, {});
    for (std::uint32_t v = 0; v < 8; ++v) {
      if (rng.uniform01() < 0.8) s.record_score(id(v), std::round(rng.uniform01() * 4) / 4, 0);
    }
    std::vector<AnchorContext> pool;
    for (std::size_t i = 0, n = 1 + rng.uniform_index(8); i < n; ++i) {
      std::vector<MoleculeId> m;
      for (std::uint32_t v = 0; v < 8; ++v) {
        if (rng.uniform01() < 0.4) m.push_back(id(v));
      }
      if (m.empty()) m.push_back(id(static_cast<std::uint32_t>(rng.uniform_index(8))));
      pool.emplace_back(m);
    }
    AnchorParams p;
    p.batch_size = 1 + rng.uniform_index(3);
    CHECK(select_anchors(pool, s, p) == oracles::greedy(pool, s, p));
  }
}

TEST_CASE("random anchors") {
  AnchorParams p;
  p.batch_size = 4;
  auto one = fixtures::state_from(1, {});
  Rng rng(3);
  const auto singles = random_anchors(one, p, rng);
  CHECK(singles.size() == 4);
  for (const auto& c : singles) CHECK(c == ctx({0}));

  Rng g(5);
  auto s = fixtures::state_from(12, fixtures::random_edges(12, 0.25, g));
  Rng r1(17);
  Rng r2(17);
  const auto a = random_anchors(s, p, r1);
  CHECK(a == random_anchors(s, p, r2));
  for (const auto& c : a) {
    CHECK(is_connected(c, s.graph()));
    CHECK(c.size() <= p.context_size);
  }
}

TEST_CASE("property: affine score maps preserve the fully observed ranking") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 8;
    const auto edges = fixtures::random_edges(n, 0.4, rng);
    auto a = fixtures::state_from(n, edges);
    auto b = fixtures::state_from(n, edges);
    for (std::uint32_t v = 0; v < n; ++v) {
      const double x = rng.uniform01();
      a.record_score(id(v), x, 0);
      b.record_score(id(v), 0.5 * x + 0.25, 0);
    }
    AnchorParams p;
    p.context_size = 3;
    AnchorParams q = p;
    q.lambda_miss = 0.5 * p.lambda_miss;
    Rng ra(1);
    Rng rb(1);
    CHECK(keys(beam_search(a, p, ra)) == keys(beam_search(b, q, rb)));
  }
}

TEST_CASE("property: shifting observed scores shifts property score") {
  Rng rng(19);
  const AnchorParams p;
  for (int trial = 0; trial < 50; ++trial) {
    const double delta = rng.uniform01() * 0.3;
    auto a = fixtures::state_from(4, {{0, 1}, {1, 2}, {2, 3}});
    auto b = fixtures::state_from(4, {{0, 1}, {1, 2}, {2, 3}});
    for (std::uint32_t v = 0; v < 4; ++v) {
      const double x = rng.uniform01() * 0.7;
      a.record_score(id(v), x, 0);
      b.record_score(id(v), x + delta, 0);
    }
    CHECK(std::abs(property_score(ctx({0, 1, 2, 3}), b, p) - property_score(ctx({0, 1, 2, 3}), a, p) - delta) <
          1e-7);
  }
}
