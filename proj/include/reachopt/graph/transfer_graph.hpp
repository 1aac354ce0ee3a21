#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reachopt {

// Dense node index, assigned in insertion order and never reused.
struct MoleculeId {
  std::uint32_t value = 0;

  friend auto operator<=>(MoleculeId, MoleculeId) = default;
};

struct MoleculeRecord {
  MoleculeId id;
  std::string repr;
  // Pass that generated the molecule; nullopt for seeds.
  std::optional<int> generated_at;

  bool is_seed() const { return !generated_at.has_value(); }
};

// Undirected molecule-transfer graph. Node ids are dense, adjacency lists are
// kept sorted, and self-loops or parallel edges never enter the edge set.
class TransferGraph {
 public:
  // Throws AlreadyPresent if repr is already a node.
  MoleculeId add_node(std::string repr, std::optional<int> generated_at);

  // Returns false if the edge already existed. Throws UnknownId or SelfLoop.
  bool add_edge(MoleculeId a, MoleculeId b);

  bool contains(MoleculeId id) const { return id.value < records_.size(); }
  bool has_edge(MoleculeId a, MoleculeId b) const;
  std::optional<MoleculeId> find(std::string_view repr) const;

  // Throws UnknownId.
  const MoleculeRecord& node(MoleculeId id) const;
  std::span<const MoleculeId> neighbors(MoleculeId id) const;
  std::size_t degree(MoleculeId id) const { return neighbors(id).size(); }

  std::size_t node_count() const { return records_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<MoleculeRecord>& nodes() const { return records_; }

  // Every edge once, as (lower id, higher id), ascending.
  std::vector<std::pair<MoleculeId, MoleculeId>> edges() const;

 private:
  void require(MoleculeId id) const;

  std::vector<MoleculeRecord> records_;
  std::vector<std::vector<MoleculeId>> adjacency_;
  std::map<std::string, MoleculeId, std::less<>> index_;
  std::size_t edge_count_ = 0;
};

}  // namespace reachopt
