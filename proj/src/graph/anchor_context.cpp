#include "reachopt/graph/anchor_context.hpp"

#include <algorithm>
#include <iterator>

#include "reachopt/error.hpp"

namespace reachopt {

AnchorContext::AnchorContext(std::vector<MoleculeId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "anchor context has duplicate members");
  }
}

bool AnchorContext::contains(MoleculeId id) const {
  return std::binary_search(members_.begin(), members_.end(), id);
}

AnchorContext AnchorContext::with(MoleculeId id) const {
  AnchorContext out;
  out.members_.reserve(members_.size() + 1);
  auto it = std::lower_bound(members_.begin(), members_.end(), id);
  out.members_.insert(out.members_.end(), members_.begin(), it);
  out.members_.push_back(id);
  out.members_.insert(out.members_.end(), it, members_.end());
  return out;
}

std::string AnchorContext::key_string() const {
  std::string out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(members_[i].value);
  }
  return out;
}

double jaccard(const AnchorContext& a, const AnchorContext& b) {
  const auto ma = a.members();
  const auto mb = b.members();
  std::size_t shared = 0;
  auto ia = ma.begin();
  auto ib = mb.begin();
  while (ia != ma.end() && ib != mb.end()) {
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
  const std::size_t uni = ma.size() + mb.size() - shared;
  return uni == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(uni);
}

bool is_connected(const AnchorContext& ctx, const TransferGraph& graph) {
  if (ctx.empty()) return false;
  const auto members = ctx.members();
  std::vector<bool> seen(members.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (MoleculeId nb : graph.neighbors(members[i])) {
      auto it = std::lower_bound(members.begin(), members.end(), nb);
      if (it == members.end() || *it != nb) continue;
      const auto j = static_cast<std::size_t>(std::distance(members.begin(), it));
      if (!seen[j]) {
        seen[j] = true;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == members.size();
}

std::vector<MoleculeId> frontier(const AnchorContext& ctx, const TransferGraph& graph) {
  std::vector<MoleculeId> out;
  for (MoleculeId v : ctx.members()) {
    for (MoleculeId u : graph.neighbors(v)) {
      if (!ctx.contains(u)) out.push_back(u);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace reachopt
