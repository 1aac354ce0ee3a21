#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reachopt/synth/domain.hpp"

namespace reachopt::driver {
class ProtocolClient;
}

namespace reachopt::generate {

struct GeneratorRequest {
  std::vector<std::string> context_members;
  std::vector<std::pair<std::string, std::string>> context_edges;
  std::size_t n = 8;
  std::uint64_t rng_seed = 0;

  // Throws InvalidArgument.
  void validate() const;
};

// Position-independent single-token substitution.
struct SubstitutionRule {
  char from = 0;
  char to = 0;

  friend auto operator<=>(const SubstitutionRule&, const SubstitutionRule&) = default;
};

// Both directions of the substitution behind every context edge whose ends
// differ at exactly one position. Other edges are skipped. Sorted, unique.
std::vector<SubstitutionRule> extract_rules(const std::vector<std::string>& members,
                                            const std::vector<std::pair<std::string, std::string>>& edges);

// Every rule applied at every matching position of every member, minus the
// members themselves; sampled down to n when larger. With no rules, falls
// back to random single-token substitutions. Output sorted.
std::vector<std::string> generate_rule_based(const GeneratorRequest& req, const synth::DomainSpec& spec);

// Up to n distinct single-position substitutions of random members. Sorted.
std::vector<std::string> generate_random_mutation(const GeneratorRequest& req, std::string_view alphabet);

// Sends a "gen" request and returns the peer's molecules as given.
std::vector<std::string> generate_external(const GeneratorRequest& req, driver::ProtocolClient& client);

class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::vector<std::string> generate(const GeneratorRequest& req) = 0;
};

class RuleBasedGenerator final : public Generator {
 public:
  explicit RuleBasedGenerator(synth::DomainSpec spec) : spec_(std::move(spec)) {}
  std::vector<std::string> generate(const GeneratorRequest& req) override { return generate_rule_based(req, spec_); }

 private:
  synth::DomainSpec spec_;
};

class RandomMutationGenerator final : public Generator {
 public:
  explicit RandomMutationGenerator(std::string alphabet) : alphabet_(std::move(alphabet)) {}
  std::vector<std::string> generate(const GeneratorRequest& req) override {
    return generate_random_mutation(req, alphabet_);
  }

 private:
  std::string alphabet_;
};

class ExternalGenerator final : public Generator {
 public:
  explicit ExternalGenerator(std::shared_ptr<driver::ProtocolClient> client) : client_(std::move(client)) {}
  std::vector<std::string> generate(const GeneratorRequest& req) override { return generate_external(req, *client_); }

 private:
  std::shared_ptr<driver::ProtocolClient> client_;
};

}  // namespace reachopt::generate
