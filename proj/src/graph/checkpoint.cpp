#include "reachopt/graph/checkpoint.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "reachopt/error.hpp"

namespace reachopt {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "reachopt-checkpoint";
constexpr int kVersion = 1;

}  // namespace

void write_checkpoint(const SearchState& state, std::ostream& out) {
  const auto& graph = state.graph();
  const auto& budget = state.budget();
  const auto& norm = state.props().normalizer();
  out << json{{"kind", "header"},
              {"format", kFormat},
              {"version", kVersion},
              {"iteration", state.iteration()},
              {"budget_limit", budget.limit},
              {"budget_used", budget.used},
              {"patience", budget.early_stop.patience},
              {"min_delta", budget.early_stop.min_delta},
              {"norm_scale", norm.scale},
              {"norm_offset", norm.offset}}
             .dump()
      << '\n';
  for (const auto& rec : graph.nodes()) {
    json origin = rec.is_seed() ? json("seed") : json{{"generated", *rec.generated_at}};
    out << json{{"kind", "node"}, {"id", rec.id.value}, {"repr", rec.repr}, {"origin", origin}}.dump() << '\n';
  }
  for (const auto& [a, b] : graph.edges()) {
    out << json{{"kind", "edge"}, {"a", a.value}, {"b", b.value}}.dump() << '\n';
  }
  for (const auto& rec : graph.nodes()) {
    const auto usage = state.trace().usage(rec.id);
    const auto last = state.trace().last_selected(rec.id);
    if (usage == 0 && !last) continue;
    out << json{{"kind", "trace"}, {"id", rec.id.value}, {"usage", usage},
                {"last_selected", last ? json(*last) : json(nullptr)}}
               .dump()
        << '\n';
  }
  for (const auto& c : state.props().calls()) {
    out << json{{"kind", "call"},      {"call_index", c.call_index}, {"iteration", c.iteration},
                {"molecule", c.molecule}, {"raw", c.raw}}
               .dump()
        << '\n';
  }
  for (const auto& m : state.rejected()) {
    out << json{{"kind", "rejected"}, {"molecule", m}}.dump() << '\n';
  }
}

SearchState read_checkpoint(std::istream& in) {
  SearchState state;
  bool have_header = false;
  std::string line;
  std::size_t lineno = 0;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const json rec = json::parse(line);
      const std::string kind = rec.at("kind");
      if (kind == "header") {
        if (rec.at("format") != kFormat || rec.at("version") != kVersion) {
          throw Error(ErrorCode::kIoError, "unsupported checkpoint format");
        }
        state.iteration_ = rec.at("iteration");
        state.budget_.limit = rec.at("budget_limit");
        state.budget_.early_stop.patience = rec.at("patience");
        state.budget_.early_stop.min_delta = rec.at("min_delta");
        state.props_ = PropertyStore(Normalizer{rec.at("norm_scale"), rec.at("norm_offset")});
        have_header = true;
        continue;
      }
      if (!have_header) throw Error(ErrorCode::kIoError, "checkpoint does not start with a header");
      if (kind == "node") {
        const auto& origin = rec.at("origin");
        std::optional<int> generated;
        if (origin.is_object()) generated = origin.at("generated").get<int>();
        const MoleculeId id = state.graph_.add_node(rec.at("repr"), generated);
        if (id.value != rec.at("id").get<std::uint32_t>()) throw Error(ErrorCode::kIoError, "node ids not dense");
        state.node_score_.emplace_back();
      } else if (kind == "edge") {
        state.graph_.add_edge(MoleculeId{rec.at("a")}, MoleculeId{rec.at("b")});
      } else if (kind == "trace") {
        std::optional<int> last;
        if (!rec.at("last_selected").is_null()) last = rec.at("last_selected").get<int>();
        state.trace_.set(MoleculeId{rec.at("id")}, rec.at("usage"), last);
      } else if (kind == "call") {
        const auto& c = state.props_.add(rec.at("molecule"), rec.at("raw"), rec.at("iteration"));
        ++state.budget_.used;
        if (auto id = state.graph_.find(c.molecule)) state.node_score_[id->value] = c.normalized;
      } else if (kind == "rejected") {
        state.rejected_.push_back(rec.at("molecule"));
      } else {
        throw Error(ErrorCode::kIoError, "unknown record kind '" + kind + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIoError, "checkpoint line " + std::to_string(lineno) + ": " + e.what());
  }
  if (!have_header) throw Error(ErrorCode::kIoError, "empty checkpoint");
  state.trace_.resize(state.graph_.node_count());
  return state;
}

}  // namespace reachopt
