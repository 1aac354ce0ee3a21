#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include "reachopt/domain.hpp"
#include "reachopt/synth/domain.hpp"

namespace reachopt::driver {

// Answers wire-protocol requests with the builtin synthetic domain:
//   score -> {"value"}, canon -> {"mol"}, link -> {"prob"}, gen -> {"mols"}.
// Failures of any kind become {"ok":false,"error":...}; a line that is not a
// JSON object is answered with "id": null.
class ProtocolServer {
 public:
  ProtocolServer(synth::DomainSpec spec, std::unique_ptr<Oracle> oracle);

  // One request line in, one response line out (no trailing newline).
  std::string handle_line(std::string_view line);

  // Serves until end of input.
  void serve(std::istream& in, std::ostream& out);

  // Listens on 127.0.0.1:port (0 picks a free port, reported through
  // on_listening) and serves connections one at a time. Stops after
  // max_connections connections when that is non-zero.
  void serve_tcp(int port, const std::function<void(int)>& on_listening, std::size_t max_connections = 0);

 private:
  synth::DomainSpec spec_;
  std::unique_ptr<Oracle> oracle_;
};

}  // namespace reachopt::driver
