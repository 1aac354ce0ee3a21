#include <algorithm>
#include <set>

#include "reachopt/driver/protocol.hpp"
#include "reachopt/error.hpp"
#include "reachopt/generate/generator.hpp"

namespace reachopt::generate {

std::vector<std::string> generate_rule_based(const GeneratorRequest& req, const synth::DomainSpec& spec) {
  req.validate();
  const auto rules = extract_rules(req.context_members, req.context_edges);
  if (rules.empty()) return generate_random_mutation(req, spec.alphabet);

  const std::set<std::string> members(req.context_members.begin(), req.context_members.end());
  std::set<std::string> pool;
  for (const auto& m : req.context_members) {
    for (const auto& rule : rules) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] != rule.from) continue;
        std::string cand = m;
        cand[i] = rule.to;
        if (!members.contains(cand)) pool.insert(std::move(cand));
      }
    }
  }
  std::vector<std::string> out(pool.begin(), pool.end());
  if (out.size() > req.n) {
    Rng rng(req.rng_seed);
    auto picks = rng.sample_indices(out.size(), req.n);
    std::sort(picks.begin(), picks.end());
    std::vector<std::string> sampled;
    sampled.reserve(picks.size());
    for (std::size_t i : picks) sampled.push_back(std::move(out[i]));
    out = std::move(sampled);
  }
  return out;
}

std::vector<std::string> generate_random_mutation(const GeneratorRequest& req, std::string_view alphabet) {
  req.validate();
  if (alphabet.size() < 2) throw Error(ErrorCode::kInvalidArgument, "mutation needs at least two tokens");
  Rng rng(req.rng_seed);
  std::set<std::string> out;
  // Small neighbourhoods can hold fewer than n distinct mutants.
  const std::size_t max_draws = 20 * req.n;
  for (std::size_t draw = 0; draw < max_draws && out.size() < req.n; ++draw) {
    std::string m = req.context_members[rng.uniform_index(req.context_members.size())];
    if (m.empty()) continue;
    const std::size_t pos = rng.uniform_index(m.size());
    const auto cur = alphabet.find(m[pos]);
    char replacement;
    if (cur == std::string_view::npos) {
      replacement = alphabet[rng.uniform_index(alphabet.size())];
    } else {
      replacement = alphabet[(cur + 1 + rng.uniform_index(alphabet.size() - 1)) % alphabet.size()];
    }
    m[pos] = replacement;
    out.insert(std::move(m));
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> generate_external(const GeneratorRequest& req, driver::ProtocolClient& client) {
  req.validate();
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : req.context_edges) edges.push_back({a, b});
  const auto response =
      client.roundtrip({{"op", "gen"}, {"context", req.context_members}, {"edges", edges}, {"n", req.n}});
  if (!response.contains("mols") || !response["mols"].is_array()) {
    throw Error(ErrorCode::kProtocolError, "gen response lacks a 'mols' array");
  }
  std::vector<std::string> out;
  for (const auto& m : response["mols"]) {
    if (!m.is_string()) throw Error(ErrorCode::kProtocolError, "gen response has a non-string molecule");
    out.push_back(m.get<std::string>());
  }
  return out;
}

}  // namespace reachopt::generate
