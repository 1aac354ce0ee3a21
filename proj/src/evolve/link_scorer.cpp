#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "reachopt/error.hpp"
#include "reachopt/evolve/link.hpp"

namespace reachopt::evolve {

double exact_link_oracle(std::string_view a, std::string_view b, const DomainAdapter& domain) {
  auto ca = domain.canonicalize(a);
  auto cb = domain.canonicalize(b);
  if (!ca) throw Error(ErrorCode::kInvalidMolecule, "'" + std::string(a) + "'");
  if (!cb) throw Error(ErrorCode::kInvalidMolecule, "'" + std::string(b) + "'");
  return domain.related(*ca, *cb) ? 1.0 : 0.0;
}

namespace {

double shared_kmer_fraction(std::string_view a, std::string_view b) {
  constexpr std::size_t k = 3;
  if (a.size() < k || b.size() < k) return 0.0;
  std::map<std::string_view, int> counts;
  for (std::size_t i = 0; i + k <= a.size(); ++i) ++counts[a.substr(i, k)];
  std::size_t shared = 0;
  for (std::size_t i = 0; i + k <= b.size(); ++i) {
    auto it = counts.find(b.substr(i, k));
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++shared;
    }
  }
  const std::size_t windows = std::max(a.size(), b.size()) - k + 1;
  return static_cast<double>(shared) / static_cast<double>(windows);
}

}  // namespace

LinkFeatures link_features(std::string_view a, std::string_view b, const synth::DomainSpec& spec) {
  return {synth::tanimoto(synth::fingerprint(a, spec), synth::fingerprint(b, spec)), shared_kmer_fraction(a, b),
          a.size() != b.size() ? 1.0 : 0.0};
}

FeatureLinkModel::FeatureLinkModel(synth::DomainSpec spec) : spec_(std::move(spec)) {}

double FeatureLinkModel::logit(const LinkFeatures& f) const {
  double z = bias;
  for (std::size_t i = 0; i < kLinkFeatureCount; ++i) z += weights[i] * f[i];
  return z;
}

double FeatureLinkModel::probability(const LinkFeatures& f) const { return 1.0 / (1.0 + std::exp(-logit(f))); }

double FeatureLinkModel::score(std::string_view a, std::string_view b) const {
  return probability(link_features(a, b, spec_));
}

void FeatureLinkModel::save(std::ostream& out) const {
  out.precision(17);
  out << "# feature-link-model v1\n";
  for (std::size_t i = 0; i < kLinkFeatureCount; ++i) {
    out << "feature " << kLinkFeatureNames[i] << ' ' << weights[i] << '\n';
  }
  out << "bias " << bias << '\n';
  out << "threshold " << threshold << '\n';
}

FeatureLinkModel FeatureLinkModel::load(std::istream& in, synth::DomainSpec spec) {
  FeatureLinkModel model(std::move(spec));
  std::array<bool, kLinkFeatureCount> seen{};
  bool have_bias = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "feature") {
      std::string name;
      double w = 0.0;
      if (!(fields >> name >> w)) throw Error(ErrorCode::kIoError, "bad feature line: " + line);
      auto it = std::find(kLinkFeatureNames.begin(), kLinkFeatureNames.end(), name);
      if (it == kLinkFeatureNames.end()) throw Error(ErrorCode::kIoError, "unknown feature '" + name + "'");
      const auto i = static_cast<std::size_t>(it - kLinkFeatureNames.begin());
      model.weights[i] = w;
      seen[i] = true;
    } else if (tag == "bias") {
      if (!(fields >> model.bias)) throw Error(ErrorCode::kIoError, "bad bias line: " + line);
      have_bias = true;
    } else if (tag == "threshold") {
      if (!(fields >> model.threshold)) throw Error(ErrorCode::kIoError, "bad threshold line: " + line);
    } else {
      throw Error(ErrorCode::kIoError, "unknown line: " + line);
    }
  }
  if (!have_bias || !std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
    throw Error(ErrorCode::kIoError, "link model record is incomplete");
  }
  return model;
}

}  // namespace reachopt::evolve
