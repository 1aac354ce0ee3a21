#pragma once

#include <iosfwd>

#include "reachopt/graph/search_state.hpp"

namespace reachopt {

// Line-oriented snapshot: one JSON object per line, in this order:
//   {"kind":"header",...} {"kind":"node",...}* {"kind":"edge",...}*
//   {"kind":"trace",...}* {"kind":"call",...}* {"kind":"rejected",...}*
// Output depends only on the state, so equal states give equal bytes.
void write_checkpoint(const SearchState& state, std::ostream& out);

// Throws IoError on malformed input.
SearchState read_checkpoint(std::istream& in);

}  // namespace reachopt
