#include "reachopt/synth/domain.hpp"

#include <algorithm>
#include <set>

#include "reachopt/error.hpp"

namespace reachopt::synth {

void DomainSpec::validate() const {
  std::set<char> distinct(alphabet.begin(), alphabet.end());
  if (distinct.size() != alphabet.size()) throw Error(ErrorCode::kInvalidArgument, "alphabet has repeated tokens");
  if (alphabet.size() < 2) throw Error(ErrorCode::kInvalidArgument, "alphabet needs at least two tokens");
  if (length < 1) throw Error(ErrorCode::kInvalidArgument, "molecule length must be at least 1");
}

std::optional<std::size_t> DomainSpec::token_index(char token) const {
  const auto pos = alphabet.find(token);
  if (pos == std::string::npos) return std::nullopt;
  return pos;
}

bool is_valid(std::string_view m, const DomainSpec& spec) {
  if (m.size() != spec.length) return false;
  return std::all_of(m.begin(), m.end(), [&](char c) { return spec.alphabet.find(c) != std::string::npos; });
}

std::string canonicalize(std::string_view raw, const DomainSpec& spec) {
  if (!is_valid(raw, spec)) throw Error(ErrorCode::kInvalidMolecule, "'" + std::string(raw) + "'");
  return std::string(raw);
}

std::size_t hamming(std::string_view a, std::string_view b) {
  std::size_t d = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) d += a[i] != b[i];
  return d;
}

bool related(std::string_view a, std::string_view b, const DomainSpec& spec) {
  if (!is_valid(a, spec)) throw Error(ErrorCode::kInvalidMolecule, "'" + std::string(a) + "'");
  if (!is_valid(b, spec)) throw Error(ErrorCode::kInvalidMolecule, "'" + std::string(b) + "'");
  return hamming(a, b) == 1;
}

Fingerprint fingerprint(std::string_view m, const DomainSpec& spec) {
  if (!is_valid(m, spec)) throw Error(ErrorCode::kInvalidMolecule, "'" + std::string(m) + "'");
  const auto q = static_cast<std::uint32_t>(spec.alphabet.size());
  Fingerprint bits;
  bits.reserve(m.size());
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    const auto a = static_cast<std::uint32_t>(*spec.token_index(m[i]));
    const auto b = static_cast<std::uint32_t>(*spec.token_index(m[i + 1]));
    bits.push_back(static_cast<std::uint32_t>(i) * q * q + a * q + b);
  }
  // Already ascending: the position dominates the key.
  return bits;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  std::size_t shared = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++shared;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - shared;
  return uni == 0 ? 1.0 : static_cast<double>(shared) / static_cast<double>(uni);
}

SynthDomain::SynthDomain(DomainSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

std::optional<std::string> SynthDomain::canonicalize(std::string_view raw) const {
  if (!is_valid(raw, spec_)) return std::nullopt;
  return std::string(raw);
}

bool SynthDomain::related(std::string_view a, std::string_view b) const { return synth::related(a, b, spec_); }

}  // namespace reachopt::synth
