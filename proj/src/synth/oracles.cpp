#include "reachopt/error.hpp"
#include "reachopt/synth/domain.hpp"

namespace reachopt::synth {

double score_hidden_target(std::string_view m, std::string_view target, const DomainSpec& spec) {
  if (!is_valid(m, spec)) throw Error(ErrorCode::kInvalidMolecule, "'" + std::string(m) + "'");
  if (!is_valid(target, spec)) throw Error(ErrorCode::kInvalidMolecule, "target '" + std::string(target) + "'");
  std::size_t matches = 0;
  for (std::size_t i = 0; i < m.size(); ++i) matches += m[i] == target[i];
  return static_cast<double>(matches) / static_cast<double>(spec.length);
}

double score_nk(std::string_view m, const NkSpec& nk, const DomainSpec& spec) {
  if (!is_valid(m, spec)) throw Error(ErrorCode::kInvalidMolecule, "'" + std::string(m) + "'");
  if (nk.k >= spec.length) throw Error(ErrorCode::kInvalidArgument, "NK interaction order k must be < length");
  const std::size_t n = spec.length;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t h = mix64(nk.seed ^ 0x6e6b2d6f7261636cULL);
    h = mix64(h ^ static_cast<std::uint64_t>(i));
    for (std::size_t j = 0; j <= nk.k; ++j) {
      const auto tok = static_cast<std::uint64_t>(*spec.token_index(m[(i + j) % n]));
      h = mix64(h ^ (tok + 1));
    }
    total += static_cast<double>(h >> 11) * 0x1.0p-53;
  }
  return total / static_cast<double>(n);
}

HiddenTargetOracle::HiddenTargetOracle(DomainSpec spec, std::string target)
    : spec_(std::move(spec)), target_(canonicalize(target, spec_)) {}

double HiddenTargetOracle::evaluate(const std::string& canonical) {
  return score_hidden_target(canonical, target_, spec_);
}

NkOracle::NkOracle(DomainSpec spec, NkSpec nk) : spec_(std::move(spec)), nk_(nk) {
  if (nk_.k >= spec_.length) throw Error(ErrorCode::kInvalidArgument, "NK interaction order k must be < length");
}

double NkOracle::evaluate(const std::string& canonical) { return score_nk(canonical, nk_, spec_); }

}  // namespace reachopt::synth
