#pragma once

#include <sys/types.h>

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace reachopt::driver {

// Where an external peer lives. Peers speak newline-delimited JSON: one
// request object per line, one response object per line, carrying the id.
struct ProtocolEndpoint {
  enum class Transport { kChildProcess, kTcp };

  Transport transport = Transport::kChildProcess;
  std::vector<std::string> command;  // argv for kChildProcess
  std::string host = "127.0.0.1";    // kTcp
  int port = 0;                      // kTcp
  int timeout_ms = 10000;

  // Throws ConfigError.
  void validate() const;
};

// One connection, one request in flight.
class ProtocolClient {
 public:
  explicit ProtocolClient(ProtocolEndpoint endpoint);
  ~ProtocolClient();
  ProtocolClient(const ProtocolClient&) = delete;
  ProtocolClient& operator=(const ProtocolClient&) = delete;

  // Assigns the next id, writes the request, reads one response line and
  // checks it. Returns the response object (ok == true).
  // Throws Timeout, ProtocolError (malformed line, id mismatch, stream
  // closed) or PeerError (ok == false).
  nlohmann::json roundtrip(nlohmann::json request);

  // Writes one raw line and returns the next response line unchecked.
  // Used by the conformance checker to probe malformed input.
  std::string exchange_raw(const std::string& line);

  // Closes the connection (terminating a child peer) and opens a new one.
  void restart();

  const ProtocolEndpoint& endpoint() const { return endpoint_; }

 private:
  void open();
  void close();
  void write_line(const std::string& line);
  std::string read_line();

  ProtocolEndpoint endpoint_;
  int read_fd_ = -1;
  int write_fd_ = -1;
  pid_t child_ = -1;
  std::string buffer_;
  std::uint64_t next_id_ = 1;
};

}  // namespace reachopt::driver
