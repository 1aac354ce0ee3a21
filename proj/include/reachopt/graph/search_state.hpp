#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reachopt/graph/anchor_context.hpp"
#include "reachopt/graph/transfer_graph.hpp"

namespace reachopt {

class SearchState;
SearchState read_checkpoint(std::istream& in);

// Per-node usage counts c(v) and last-selected pass rho(v).
class SearchTrace {
 public:
  void resize(std::size_t node_count);

  std::uint32_t usage(MoleculeId id) const;
  std::optional<int> last_selected(MoleculeId id) const;

  // Each occurrence of a node across the contexts adds one to its usage.
  void record(std::span<const AnchorContext> selected, int iteration);

  // Checkpoint restore.
  void set(MoleculeId id, std::uint32_t usage, std::optional<int> last_selected);

 private:
  std::vector<std::uint32_t> usage_;
  std::vector<std::optional<int>> last_selected_;
};

// Affine raw -> [0,1] map oriented for maximization; results are clamped.
struct Normalizer {
  double scale = 1.0;
  double offset = 0.0;

  double apply(double raw) const;
};

struct CallRecord {
  std::uint32_t call_index = 0;  // 1-based, contiguous
  int iteration = 0;             // 0 for seed scoring
  std::string molecule;
  double raw = 0.0;
  double normalized = 0.0;
};

// Oracle observations keyed by canonical molecule, plus the call order.
// Keyed by string rather than id so candidates can be scored before they
// are (or fail to be) inserted into the graph.
class PropertyStore {
 public:
  explicit PropertyStore(Normalizer normalizer = {}) : normalizer_(normalizer) {}

  bool contains(std::string_view molecule) const { return by_molecule_.contains(molecule); }
  std::optional<double> normalized(std::string_view molecule) const;
  std::optional<double> raw(std::string_view molecule) const;

  // Throws AlreadyScored.
  const CallRecord& add(std::string molecule, double raw, int iteration);

  std::span<const CallRecord> calls() const { return calls_; }
  std::vector<double> normalized_history() const;
  const Normalizer& normalizer() const { return normalizer_; }

 private:
  Normalizer normalizer_;
  std::vector<CallRecord> calls_;
  std::map<std::string, std::size_t, std::less<>> by_molecule_;
};

struct EarlyStopRule {
  int patience = 5;
  double min_delta = 1e-3;
};

struct BudgetLedger {
  std::size_t limit = 0;
  std::size_t used = 0;
  EarlyStopRule early_stop;

  bool exhausted() const { return used >= limit; }
  std::size_t remaining() const { return exhausted() ? 0 : limit - used; }
};

enum class InsertMode {
  kConnected,          // at least one edge required
  kAllowUnconnected,   // ablation callers that bypass the reachability gate
};

// The search state: graph, trace, property store, pass counter and budget.
class SearchState {
 public:
  // Throws DuplicateSeed, DanglingEdge, SelfLoop, InvalidArgument (no seeds).
  static SearchState init(const std::vector<std::string>& seed_molecules,
                          const std::vector<std::pair<std::string, std::string>>& seed_edges,
                          BudgetLedger budget, Normalizer normalizer = {});

  // Throws AlreadyPresent, NoConnection, UnknownId.
  MoleculeId insert_molecule(std::string repr, std::span<const MoleculeId> edges_to, int iteration,
                             InsertMode mode = InsertMode::kConnected);

  // True iff a path of edges joins id to a seed node. Throws UnknownId.
  bool is_reachable(MoleculeId id) const;

  // Scores a graph node. Throws UnknownId, AlreadyScored, BudgetExhausted.
  const CallRecord& record_score(MoleculeId id, double raw, int iteration);
  // Scores a candidate that may not be in the graph. Same errors.
  const CallRecord& record_candidate_score(const std::string& molecule, double raw, int iteration);

  // Stamps the selected contexts with the current pass.
  void update_trace(std::span<const AnchorContext> selected);

  // Molecules scored but never inserted.
  void log_rejected(std::string molecule) { rejected_.push_back(std::move(molecule)); }
  std::span<const std::string> rejected() const { return rejected_; }

  // Normalized score of a node if observed. O(1).
  std::optional<double> score_of(MoleculeId id) const;

  const TransferGraph& graph() const { return graph_; }
  const SearchTrace& trace() const { return trace_; }
  const PropertyStore& props() const { return props_; }
  const BudgetLedger& budget() const { return budget_; }

  // Number of completed passes.
  int iteration() const { return iteration_; }
  // Pass currently being executed (1-based).
  int current_pass() const { return iteration_ + 1; }
  void advance_iteration() { ++iteration_; }

 private:
  friend SearchState read_checkpoint(std::istream& in);

  const CallRecord& charge(const std::string& molecule, double raw, int iteration);

  TransferGraph graph_;
  SearchTrace trace_;
  PropertyStore props_;
  BudgetLedger budget_;
  int iteration_ = 0;
  std::vector<std::optional<double>> node_score_;
  std::vector<std::string> rejected_;
};

}  // namespace reachopt
