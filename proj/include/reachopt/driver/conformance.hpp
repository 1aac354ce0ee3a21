#pragma once

#include <map>
#include <string>
#include <vector>

#include "reachopt/driver/protocol.hpp"

namespace reachopt::driver {

// A conformance corpus is a JSON-lines file. Each case is
//   {"name": ..., "send": {request without id} | "send_raw": "line",
//    "expect": {"ok": bool, "field": "value"|"mol"|"prob"|"mols",
//               "type": "number"|"string"|"array", "range": [lo, hi]}}
// String values of the form "$NAME" inside "send" are replaced from the
// substitution map, so one corpus serves any molecule domain.
struct ConformanceResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<ConformanceResult> run_conformance(ProtocolClient& client, const std::string& corpus_path,
                                               const std::map<std::string, std::string>& substitutions);

}  // namespace reachopt::driver
