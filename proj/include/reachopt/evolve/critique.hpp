#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "reachopt/domain.hpp"
#include "reachopt/graph/search_state.hpp"

namespace reachopt::evolve {

enum class RejectReason { kInvalid, kDuplicateInBatch, kAlreadyInGraph };

std::string_view to_string(RejectReason reason);

struct Rejection {
  std::string raw;
  RejectReason reason;

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

struct CritiqueReport {
  std::vector<std::string> retained;  // canonical, distinct, not in the graph; first-seen order
  std::vector<Rejection> rejected;
};

// Canonicalize, drop invalid strings, molecules already in the graph and
// repeats within the batch (the first occurrence is kept).
CritiqueReport critique(const std::vector<std::string>& raw, const SearchState& state, const DomainAdapter& domain);

}  // namespace reachopt::evolve
