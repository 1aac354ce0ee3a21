#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "reachopt/domain.hpp"
#include "reachopt/driver/protocol.hpp"
#include "reachopt/evolve/link.hpp"

namespace reachopt::driver {

// "score" requests. A Timeout restarts the peer once and retries; a second
// failure of any kind raises OracleFailure.
class ExternalOracle final : public Oracle {
 public:
  explicit ExternalOracle(std::shared_ptr<ProtocolClient> client) : client_(std::move(client)) {}
  double evaluate(const std::string& canonical) override;

 private:
  std::shared_ptr<ProtocolClient> client_;
};

// "canon" for canonicalization (a PeerError means invalid) and "link"
// (probability > 0.5) for the ground-truth relation.
class ExternalDomain final : public DomainAdapter {
 public:
  explicit ExternalDomain(std::shared_ptr<ProtocolClient> client) : client_(std::move(client)) {}
  std::optional<std::string> canonicalize(std::string_view raw) const override;
  bool related(std::string_view a, std::string_view b) const override;

 private:
  std::shared_ptr<ProtocolClient> client_;
};

class ExternalLinkScorer final : public evolve::LinkScorer {
 public:
  explicit ExternalLinkScorer(std::shared_ptr<ProtocolClient> client) : client_(std::move(client)) {}
  double score(std::string_view a, std::string_view b) const override;

 private:
  std::shared_ptr<ProtocolClient> client_;
};

}  // namespace reachopt::driver
