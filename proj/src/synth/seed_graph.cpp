#include <set>

#include "reachopt/error.hpp"
#include "reachopt/synth/domain.hpp"

namespace reachopt::synth {

std::string random_molecule(const DomainSpec& spec, Rng& rng) {
  std::string m(spec.length, ' ');
  for (auto& c : m) c = spec.alphabet[rng.uniform_index(spec.alphabet.size())];
  return m;
}

EdgeList derive_edges(const std::vector<std::string>& molecules, const DomainSpec& spec) {
  EdgeList edges;
  for (std::size_t i = 0; i < molecules.size(); ++i) {
    for (std::size_t j = i + 1; j < molecules.size(); ++j) {
      if (related(molecules[i], molecules[j], spec)) edges.emplace_back(molecules[i], molecules[j]);
    }
  }
  return edges;
}

SeedGraph analogue_series(const DomainSpec& spec, const SeriesOptions& options, Rng& rng) {
  spec.validate();
  if (options.variable_sites < 1 || options.variable_sites > spec.length) {
    throw Error(ErrorCode::kInvalidArgument, "variable_sites must be in [1, length]");
  }
  SeedGraph out;
  std::set<std::string> seen;
  const std::size_t q = spec.alphabet.size();
  for (std::size_t s = 0; s < options.series; ++s) {
    std::string root = random_molecule(spec, rng);
    while (seen.contains(root)) root = random_molecule(spec, rng);
    const auto sites = rng.sample_indices(spec.length, options.variable_sites);
    std::vector<std::string> members{root};
    seen.insert(root);
    // Bounded retries: a series may saturate its variable sites.
    std::size_t attempts = 0;
    const std::size_t max_attempts = 100 * options.per_series + 100;
    while (members.size() < options.per_series && attempts++ < max_attempts) {
      std::string m = members[rng.uniform_index(members.size())];
      const std::size_t pos = sites[rng.uniform_index(sites.size())];
      const std::size_t cur = *spec.token_index(m[pos]);
      m[pos] = spec.alphabet[(cur + 1 + rng.uniform_index(q - 1)) % q];
      if (seen.insert(m).second) members.push_back(std::move(m));
    }
    out.molecules.insert(out.molecules.end(), members.begin(), members.end());
  }
  out.edges = derive_edges(out.molecules, spec);
  return out;
}

}  // namespace reachopt::synth
