#include "reachopt/driver/external.hpp"

#include <algorithm>

#include "reachopt/error.hpp"

namespace reachopt::driver {

namespace {

double number_field(const nlohmann::json& resp, const char* key) {
  if (!resp.contains(key) || !resp[key].is_number()) {
    throw Error(ErrorCode::kProtocolError, std::string("response lacks a numeric '") + key + "'");
  }
  return resp[key].get<double>();
}

}  // namespace

double ExternalOracle::evaluate(const std::string& canonical) {
  const nlohmann::json req = {{"op", "score"}, {"mol", canonical}};
  try {
    return number_field(client_->roundtrip(req), "value");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTimeout) throw Error(ErrorCode::kOracleFailure, e.what());
  }
  try {
    client_->restart();
    return number_field(client_->roundtrip(req), "value");
  } catch (const Error& e) {
    throw Error(ErrorCode::kOracleFailure, std::string("after restart: ") + e.what());
  }
}

std::optional<std::string> ExternalDomain::canonicalize(std::string_view raw) const {
  try {
    const auto resp = client_->roundtrip({{"op", "canon"}, {"mol", raw}});
    if (!resp.contains("mol") || !resp["mol"].is_string()) {
      throw Error(ErrorCode::kProtocolError, "canon response lacks a string 'mol'");
    }
    return resp["mol"].get<std::string>();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kPeerError) return std::nullopt;
    throw;
  }
}

bool ExternalDomain::related(std::string_view a, std::string_view b) const {
  return number_field(client_->roundtrip({{"op", "link"}, {"a", a}, {"b", b}}), "prob") > 0.5;
}

double ExternalLinkScorer::score(std::string_view a, std::string_view b) const {
  // Order the pair so the peer sees the same request both ways round.
  const auto [lo, hi] = std::minmax(a, b);
  return std::clamp(number_field(client_->roundtrip({{"op", "link"}, {"a", lo}, {"b", hi}}), "prob"), 0.0, 1.0);
}

}  // namespace reachopt::driver
