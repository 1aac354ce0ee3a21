#include <algorithm>
#include <set>

#include "reachopt/error.hpp"
#include "reachopt/generate/generator.hpp"

namespace reachopt::generate {

void GeneratorRequest::validate() const {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "generator request needs n >= 1");
  if (context_members.empty()) throw Error(ErrorCode::kInvalidArgument, "generator request has no context");
  std::set<std::string_view> seen(context_members.begin(), context_members.end());
  if (seen.size() != context_members.size()) {
    throw Error(ErrorCode::kInvalidArgument, "generator context has repeated members");
  }
  for (const auto& [a, b] : context_edges) {
    if (!seen.contains(a) || !seen.contains(b)) {
      throw Error(ErrorCode::kInvalidArgument, "context edge (" + a + ", " + b + ") leaves the context");
    }
  }
}

std::vector<SubstitutionRule> extract_rules(const std::vector<std::string>& /*members*/,
                                            const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<SubstitutionRule> rules;
  for (const auto& [a, b] : edges) {
    if (a.size() != b.size()) continue;
    std::size_t diffs = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) {
        ++diffs;
        at = i;
      }
    }
    if (diffs != 1) continue;
    rules.push_back({a[at], b[at]});
    rules.push_back({b[at], a[at]});
  }
  std::sort(rules.begin(), rules.end());
  rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
  return rules;
}

}  // namespace reachopt::generate
