#include "reachopt/driver/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "reachopt/error.hpp"
#include "reachopt/generate/generator.hpp"

namespace reachopt::driver {

using nlohmann::json;

ProtocolServer::ProtocolServer(synth::DomainSpec spec, std::unique_ptr<Oracle> oracle)
    : spec_(std::move(spec)), oracle_(std::move(oracle)) {
  spec_.validate();
}

namespace {

std::string require_string(const json& req, const char* key) {
  if (!req.contains(key) || !req[key].is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("request needs a string '") + key + "'");
  }
  return req[key].get<std::string>();
}

}  // namespace

std::string ProtocolServer::handle_line(std::string_view line) {
  using ojson = nlohmann::ordered_json;
  json req;
  try {
    req = json::parse(line);
  } catch (const json::parse_error&) {
    return ojson{{"id", nullptr}, {"ok", false}, {"error", "malformed request"}}.dump();
  }
  if (!req.is_object()) return ojson{{"id", nullptr}, {"ok", false}, {"error", "request is not an object"}}.dump();

  ojson resp;
  resp["id"] = req.contains("id") ? req["id"] : json(nullptr);
  try {
    const std::string op = req.contains("op") && req["op"].is_string() ? req["op"].get<std::string>() : "";
    if (op == "score") {
      const auto mol = synth::canonicalize(require_string(req, "mol"), spec_);
      const double value = oracle_->evaluate(mol);
      resp["ok"] = true;
      resp["value"] = value;
    } else if (op == "canon") {
      const auto mol = synth::canonicalize(require_string(req, "mol"), spec_);
      resp["ok"] = true;
      resp["mol"] = mol;
    } else if (op == "link") {
      const bool rel = synth::related(require_string(req, "a"), require_string(req, "b"), spec_);
      resp["ok"] = true;
      resp["prob"] = rel ? 1.0 : 0.0;
    } else if (op == "gen") {
      generate::GeneratorRequest g;
      if (!req.contains("context") || !req["context"].is_array()) {
        throw Error(ErrorCode::kInvalidArgument, "gen request needs a 'context' array");
      }
      for (const auto& m : req["context"]) g.context_members.push_back(synth::canonicalize(m.get<std::string>(), spec_));
      if (req.contains("edges")) {
        for (const auto& e : req["edges"]) {
          g.context_edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        }
      }
      g.n = req.contains("n") ? req["n"].get<std::size_t>() : 8;
      g.rng_seed = req.contains("seed") ? req["seed"].get<std::uint64_t>() : 0;
      auto mols = generate::generate_rule_based(g, spec_);
      resp["ok"] = true;
      resp["mols"] = mols;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown op '" + op + "'");
    }
  } catch (const std::exception& e) {
    resp["ok"] = false;
    resp["error"] = e.what();
  }
  return resp.dump();
}

void ProtocolServer::serve(std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << handle_line(line) << '\n' << std::flush;
  }
}

void ProtocolServer::serve_tcp(int port, const std::function<void(int)>& on_listening, std::size_t max_connections) {
  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw Error(ErrorCode::kIoError, "socket: " + std::string(std::strerror(errno)));
  const int yes = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listener, 4) != 0) {
    const std::string msg = std::strerror(errno);
    ::close(listener);
    throw Error(ErrorCode::kIoError, "bind/listen on port " + std::to_string(port) + ": " + msg);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_listening) on_listening(ntohs(addr.sin_port));

  for (std::size_t served = 0; max_connections == 0 || served < max_connections; ++served) {
    const int conn = ::accept(listener, nullptr, nullptr);
    if (conn < 0) {
      if (errno == EINTR) continue;
      break;
    }
    std::string buffer;
    char chunk[4096];
    for (;;) {
      const ssize_t n = ::read(conn, chunk, sizeof chunk);
      if (n <= 0) break;
      buffer.append(chunk, static_cast<std::size_t>(n));
      std::size_t nl;
      while ((nl = buffer.find('\n')) != std::string::npos) {
        const std::string line = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        if (line.empty()) continue;
        const std::string resp = handle_line(line) + "\n";
        if (::send(conn, resp.data(), resp.size(), MSG_NOSIGNAL) < 0) break;
      }
    }
    ::close(conn);
  }
  ::close(listener);
}

}  // namespace reachopt::driver
