#include "reachopt/evolve/critique.hpp"

#include <set>

namespace reachopt::evolve {

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kInvalid: return "invalid";
    case RejectReason::kDuplicateInBatch: return "duplicate_in_batch";
    case RejectReason::kAlreadyInGraph: return "already_in_graph";
  }
  return "unknown";
}

CritiqueReport critique(const std::vector<std::string>& raw, const SearchState& state, const DomainAdapter& domain) {
  CritiqueReport report;
  std::set<std::string, std::less<>> seen;
  for (const auto& r : raw) {
    auto canon = domain.canonicalize(r);
    if (!canon) {
      report.rejected.push_back({r, RejectReason::kInvalid});
    } else if (state.graph().find(*canon)) {
      report.rejected.push_back({r, RejectReason::kAlreadyInGraph});
    } else if (!seen.insert(*canon).second) {
      report.rejected.push_back({r, RejectReason::kDuplicateInBatch});
    } else {
      report.retained.push_back(std::move(*canon));
    }
  }
  return report;
}

}  // namespace reachopt::evolve
