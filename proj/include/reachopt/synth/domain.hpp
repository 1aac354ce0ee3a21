#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reachopt/domain.hpp"
#include "reachopt/rng.hpp"

namespace reachopt::synth {

// Fixed-length strings over a small ordered alphabet. Two molecules are
// related when they differ at exactly one position: the shared positions
// play the role of the common context, the differing one the variable
// fragment.
struct DomainSpec {
  std::string alphabet = "ABCD";
  std::size_t length = 8;

  // Throws InvalidArgument (alphabet < 2 distinct tokens, length 0).
  void validate() const;
  // Position of token in the alphabet, or nullopt.
  std::optional<std::size_t> token_index(char token) const;
};

bool is_valid(std::string_view m, const DomainSpec& spec);

// Identity on valid input; throws InvalidMolecule otherwise.
std::string canonicalize(std::string_view raw, const DomainSpec& spec);

std::size_t hamming(std::string_view a, std::string_view b);

// Hamming distance exactly 1. Throws InvalidMolecule.
bool related(std::string_view a, std::string_view b, const DomainSpec& spec);

// Positional 2-grams, encoded as pos*|alphabet|^2 + idx(a)*|alphabet| + idx(b),
// sorted ascending. Size is length-1 for a valid molecule.
using Fingerprint = std::vector<std::uint32_t>;

Fingerprint fingerprint(std::string_view m, const DomainSpec& spec);

// |A ∩ B| / |A ∪ B|; 1.0 when both are empty.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

class SynthDomain final : public DomainAdapter {
 public:
  explicit SynthDomain(DomainSpec spec);

  std::optional<std::string> canonicalize(std::string_view raw) const override;
  bool related(std::string_view a, std::string_view b) const override;

  const DomainSpec& spec() const { return spec_; }

 private:
  DomainSpec spec_;
};

// ---- oracles ---------------------------------------------------------------

// Fraction of positions matching the target.
double score_hidden_target(std::string_view m, std::string_view target, const DomainSpec& spec);

struct NkSpec {
  std::size_t k = 2;
  std::uint64_t seed = 0;
};

// Mean over positions i of a hashed contribution in [0,1) of the cyclic
// window m[i..i+k]. Throws InvalidMolecule or InvalidArgument (k >= length).
double score_nk(std::string_view m, const NkSpec& nk, const DomainSpec& spec);

class HiddenTargetOracle final : public Oracle {
 public:
  HiddenTargetOracle(DomainSpec spec, std::string target);
  double evaluate(const std::string& canonical) override;
  const std::string& target() const { return target_; }

 private:
  DomainSpec spec_;
  std::string target_;
};

class NkOracle final : public Oracle {
 public:
  NkOracle(DomainSpec spec, NkSpec nk);
  double evaluate(const std::string& canonical) override;

 private:
  DomainSpec spec_;
  NkSpec nk_;
};

// Returns the same value for every molecule. Used to exercise plateaus.
class ConstantOracle final : public Oracle {
 public:
  explicit ConstantOracle(double value) : value_(value) {}
  double evaluate(const std::string&) override { return value_; }

 private:
  double value_;
};

// ---- synthetic transfer graphs --------------------------------------------

using EdgeList = std::vector<std::pair<std::string, std::string>>;

struct SeedGraph {
  std::vector<std::string> molecules;
  EdgeList edges;
};

std::string random_molecule(const DomainSpec& spec, Rng& rng);

// Every related pair among molecules, each once, in (i < j) scan order.
EdgeList derive_edges(const std::vector<std::string>& molecules, const DomainSpec& spec);

struct SeriesOptions {
  std::size_t series = 4;          // number of analogue series
  std::size_t per_series = 8;      // members per series
  std::size_t variable_sites = 3;  // positions a series may vary
};

// Analogue-series style graph: each series has a random scaffold and a random
// set of variable sites; members are grown by single-site mutations of
// existing members. Edges are the full relation over all molecules.
SeedGraph analogue_series(const DomainSpec& spec, const SeriesOptions& options, Rng& rng);

}  // namespace reachopt::synth
