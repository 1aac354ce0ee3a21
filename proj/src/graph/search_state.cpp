#include "reachopt/graph/search_state.hpp"

#include <algorithm>
#include <set>

#include "reachopt/error.hpp"

namespace reachopt {

void SearchTrace::resize(std::size_t node_count) {
  usage_.resize(node_count, 0);
  last_selected_.resize(node_count);
}

std::uint32_t SearchTrace::usage(MoleculeId id) const {
  return id.value < usage_.size() ? usage_[id.value] : 0;
}

std::optional<int> SearchTrace::last_selected(MoleculeId id) const {
  return id.value < last_selected_.size() ? last_selected_[id.value] : std::nullopt;
}

void SearchTrace::record(std::span<const AnchorContext> selected, int iteration) {
  for (const auto& ctx : selected) {
    for (MoleculeId v : ctx.members()) {
      if (v.value >= usage_.size()) {
        throw Error(ErrorCode::kUnknownId, "trace update for unknown id " + std::to_string(v.value));
      }
    }
  }
  for (const auto& ctx : selected) {
    for (MoleculeId v : ctx.members()) {
      ++usage_[v.value];
      last_selected_[v.value] = iteration;
    }
  }
}

void SearchTrace::set(MoleculeId id, std::uint32_t usage, std::optional<int> last_selected) {
  if (id.value >= usage_.size()) resize(id.value + 1);
  usage_[id.value] = usage;
  last_selected_[id.value] = last_selected;
}

double Normalizer::apply(double raw) const {
  return std::clamp(scale * raw + offset, 0.0, 1.0);
}

std::optional<double> PropertyStore::normalized(std::string_view molecule) const {
  auto it = by_molecule_.find(molecule);
  if (it == by_molecule_.end()) return std::nullopt;
  return calls_[it->second].normalized;
}

std::optional<double> PropertyStore::raw(std::string_view molecule) const {
  auto it = by_molecule_.find(molecule);
  if (it == by_molecule_.end()) return std::nullopt;
  return calls_[it->second].raw;
}

const CallRecord& PropertyStore::add(std::string molecule, double raw, int iteration) {
  if (by_molecule_.contains(molecule)) {
    throw Error(ErrorCode::kAlreadyScored, "molecule '" + molecule + "' already has a score");
  }
  CallRecord rec;
  rec.call_index = static_cast<std::uint32_t>(calls_.size() + 1);
  rec.iteration = iteration;
  rec.raw = raw;
  rec.normalized = normalizer_.apply(raw);
  rec.molecule = molecule;
  by_molecule_.emplace(std::move(molecule), calls_.size());
  calls_.push_back(std::move(rec));
  return calls_.back();
}

std::vector<double> PropertyStore::normalized_history() const {
  std::vector<double> out;
  out.reserve(calls_.size());
  for (const auto& c : calls_) out.push_back(c.normalized);
  return out;
}

SearchState SearchState::init(const std::vector<std::string>& seed_molecules,
                              const std::vector<std::pair<std::string, std::string>>& seed_edges,
                              BudgetLedger budget, Normalizer normalizer) {
  if (seed_molecules.empty()) throw Error(ErrorCode::kInvalidArgument, "seed set is empty");
  budget.used = 0;
  SearchState state;
  state.budget_ = budget;
  state.props_ = PropertyStore(normalizer);
  for (const auto& m : seed_molecules) {
    if (state.graph_.find(m)) throw Error(ErrorCode::kDuplicateSeed, "seed '" + m + "' appears twice");
    state.graph_.add_node(m, std::nullopt);
  }
  for (const auto& [a, b] : seed_edges) {
    auto ia = state.graph_.find(a);
    auto ib = state.graph_.find(b);
    if (!ia || !ib) {
      throw Error(ErrorCode::kDanglingEdge, "seed edge (" + a + ", " + b + ") references an unknown molecule");
    }
    state.graph_.add_edge(*ia, *ib);
  }
  state.trace_.resize(state.graph_.node_count());
  state.node_score_.resize(state.graph_.node_count());
  return state;
}

MoleculeId SearchState::insert_molecule(std::string repr, std::span<const MoleculeId> edges_to, int iteration,
                                        InsertMode mode) {
  if (graph_.find(repr)) throw Error(ErrorCode::kAlreadyPresent, "molecule '" + repr + "' is already in the graph");
  if (edges_to.empty() && mode == InsertMode::kConnected) {
    throw Error(ErrorCode::kNoConnection, "molecule '" + repr + "' has no edge into the graph");
  }
  for (MoleculeId u : edges_to) {
    if (!graph_.contains(u)) throw Error(ErrorCode::kUnknownId, "edge target " + std::to_string(u.value));
  }
  const auto score = props_.normalized(repr);
  const MoleculeId id = graph_.add_node(std::move(repr), iteration);
  for (MoleculeId u : edges_to) graph_.add_edge(id, u);
  trace_.resize(graph_.node_count());
  node_score_.push_back(score);
  return id;
}

bool SearchState::is_reachable(MoleculeId id) const {
  if (graph_.node(id).is_seed()) return true;
  std::vector<bool> seen(graph_.node_count(), false);
  std::vector<MoleculeId> stack{id};
  seen[id.value] = true;
  while (!stack.empty()) {
    const MoleculeId v = stack.back();
    stack.pop_back();
    for (MoleculeId u : graph_.neighbors(v)) {
      if (seen[u.value]) continue;
      if (graph_.node(u).is_seed()) return true;
      seen[u.value] = true;
      stack.push_back(u);
    }
  }
  return false;
}

const CallRecord& SearchState::charge(const std::string& molecule, double raw, int iteration) {
  if (props_.contains(molecule)) {
    throw Error(ErrorCode::kAlreadyScored, "molecule '" + molecule + "' already has a score");
  }
  if (budget_.exhausted()) {
    throw Error(ErrorCode::kBudgetExhausted, "oracle budget of " + std::to_string(budget_.limit) + " calls used up");
  }
  const CallRecord& rec = props_.add(molecule, raw, iteration);
  ++budget_.used;
  if (auto id = graph_.find(molecule)) node_score_[id->value] = rec.normalized;
  return rec;
}

const CallRecord& SearchState::record_score(MoleculeId id, double raw, int iteration) {
  return charge(graph_.node(id).repr, raw, iteration);
}

const CallRecord& SearchState::record_candidate_score(const std::string& molecule, double raw, int iteration) {
  return charge(molecule, raw, iteration);
}

void SearchState::update_trace(std::span<const AnchorContext> selected) {
  trace_.record(selected, current_pass());
}

std::optional<double> SearchState::score_of(MoleculeId id) const {
  if (id.value >= node_score_.size()) throw Error(ErrorCode::kUnknownId, std::to_string(id.value));
  return node_score_[id.value];
}

}  // namespace reachopt
