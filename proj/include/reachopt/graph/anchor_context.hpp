#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "reachopt/graph/transfer_graph.hpp"

namespace reachopt {

// A set of molecules used to condition generation. Members are kept sorted,
// so the member list doubles as the canonical key and comparison is by key.
class AnchorContext {
 public:
  AnchorContext() = default;
  // Sorts the members; throws InvalidArgument on duplicate ids.
  explicit AnchorContext(std::vector<MoleculeId> members);

  std::span<const MoleculeId> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(MoleculeId id) const;

  // Copy with one extra member. Precondition: id is not already a member.
  AnchorContext with(MoleculeId id) const;

  // "3-7-12"
  std::string key_string() const;

  friend bool operator==(const AnchorContext&, const AnchorContext&) = default;
  friend auto operator<=>(const AnchorContext& a, const AnchorContext& b) {
    return a.members_ <=> b.members_;
  }

 private:
  std::vector<MoleculeId> members_;
};

// |A ∩ B| / |A ∪ B|; 0 when both are empty.
double jaccard(const AnchorContext& a, const AnchorContext& b);

// True when the members induce a connected subgraph (BFS restricted to members).
bool is_connected(const AnchorContext& ctx, const TransferGraph& graph);

// Nodes outside ctx adjacent to at least one member, ascending.
std::vector<MoleculeId> frontier(const AnchorContext& ctx, const TransferGraph& graph);

}  // namespace reachopt
