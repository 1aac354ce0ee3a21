#include "reachopt/graph/transfer_graph.hpp"

#include <algorithm>

#include "reachopt/error.hpp"

namespace reachopt {

MoleculeId TransferGraph::add_node(std::string repr, std::optional<int> generated_at) {
  if (index_.contains(repr)) {
    throw Error(ErrorCode::kAlreadyPresent, "molecule '" + repr + "' is already in the graph");
  }
  const MoleculeId id{static_cast<std::uint32_t>(records_.size())};
  index_.emplace(repr, id);
  records_.push_back(MoleculeRecord{id, std::move(repr), generated_at});
  adjacency_.emplace_back();
  return id;
}

void TransferGraph::require(MoleculeId id) const {
  if (!contains(id)) {
    throw Error(ErrorCode::kUnknownId, "no molecule with id " + std::to_string(id.value));
  }
}

bool TransferGraph::add_edge(MoleculeId a, MoleculeId b) {
  require(a);
  require(b);
  if (a == b) throw Error(ErrorCode::kSelfLoop, "edge from id " + std::to_string(a.value) + " to itself");
  auto& na = adjacency_[a.value];
  auto it = std::lower_bound(na.begin(), na.end(), b);
  if (it != na.end() && *it == b) return false;
  na.insert(it, b);
  auto& nb = adjacency_[b.value];
  nb.insert(std::lower_bound(nb.begin(), nb.end(), a), a);
  ++edge_count_;
  return true;
}

bool TransferGraph::has_edge(MoleculeId a, MoleculeId b) const {
  if (!contains(a) || !contains(b)) return false;
  const auto& na = adjacency_[a.value];
  return std::binary_search(na.begin(), na.end(), b);
}

std::optional<MoleculeId> TransferGraph::find(std::string_view repr) const {
  auto it = index_.find(repr);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const MoleculeRecord& TransferGraph::node(MoleculeId id) const {
  require(id);
  return records_[id.value];
}

std::span<const MoleculeId> TransferGraph::neighbors(MoleculeId id) const {
  require(id);
  return adjacency_[id.value];
}

std::vector<std::pair<MoleculeId, MoleculeId>> TransferGraph::edges() const {
  std::vector<std::pair<MoleculeId, MoleculeId>> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < adjacency_.size(); ++i) {
    const MoleculeId a{static_cast<std::uint32_t>(i)};
    for (MoleculeId b : adjacency_[i]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

}  // namespace reachopt
