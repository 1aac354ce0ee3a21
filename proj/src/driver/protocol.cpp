#include "reachopt/driver/protocol.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "reachopt/error.hpp"

namespace reachopt::driver {

using nlohmann::json;

void ProtocolEndpoint::validate() const {
  if (timeout_ms <= 0) throw Error(ErrorCode::kConfigError, "endpoint timeout must be > 0");
  if (transport == Transport::kChildProcess && command.empty()) {
    throw Error(ErrorCode::kConfigError, "child-process endpoint needs a command");
  }
  if (transport == Transport::kTcp && (port <= 0 || port > 65535)) {
    throw Error(ErrorCode::kConfigError, "tcp endpoint needs a port in 1..65535");
  }
}

ProtocolClient::ProtocolClient(ProtocolEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  endpoint_.validate();
  // A peer that dies must surface as a ProtocolError, not kill us.
  ::signal(SIGPIPE, SIG_IGN);
  open();
}

ProtocolClient::~ProtocolClient() { close(); }

void ProtocolClient::open() {
  buffer_.clear();
  if (endpoint_.transport == ProtocolEndpoint::Transport::kTcp) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const std::string port = std::to_string(endpoint_.port);
    if (::getaddrinfo(endpoint_.host.c_str(), port.c_str(), &hints, &res) != 0 || res == nullptr) {
      throw Error(ErrorCode::kProtocolError, "cannot resolve " + endpoint_.host + ":" + port);
    }
    int fd = -1;
    for (addrinfo* p = res; p != nullptr; p = p->ai_next) {
      fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
      ::close(fd);
      fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw Error(ErrorCode::kProtocolError, "cannot connect to " + endpoint_.host + ":" + port);
    read_fd_ = fd;
    write_fd_ = ::dup(fd);
    return;
  }

  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) throw Error(ErrorCode::kProtocolError, "pipe: " + std::string(std::strerror(errno)));
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw Error(ErrorCode::kProtocolError, "pipe: " + std::string(std::strerror(errno)));
  }
  std::vector<char*> argv;
  for (auto& arg : endpoint_.command) argv.push_back(const_cast<char*>(arg.c_str()));
  argv.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) throw Error(ErrorCode::kProtocolError, "fork: " + std::string(std::strerror(errno)));
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execvp(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  ::fcntl(to_child[1], F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child[0], F_SETFD, FD_CLOEXEC);
  child_ = pid;
  write_fd_ = to_child[1];
  read_fd_ = from_child[0];
}

void ProtocolClient::close() {
  if (write_fd_ >= 0) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
  write_fd_ = read_fd_ = -1;
  if (child_ > 0) {
    ::kill(child_, SIGTERM);
    ::waitpid(child_, nullptr, 0);
    child_ = -1;
  }
}

void ProtocolClient::restart() {
  close();
  open();
}

void ProtocolClient::write_line(const std::string& line) {
  std::size_t off = 0;
  while (off < line.size()) {
    const ssize_t n = ::write(write_fd_, line.data() + off, line.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kProtocolError, "write to peer failed: " + std::string(std::strerror(errno)));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string ProtocolClient::read_line() {
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + std::chrono::milliseconds(endpoint_.timeout_ms);
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
    if (left <= 0) throw Error(ErrorCode::kTimeout, "no response within " + std::to_string(endpoint_.timeout_ms) + " ms");
    pollfd pfd{read_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kProtocolError, "poll failed: " + std::string(std::strerror(errno)));
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kProtocolError, "read from peer failed: " + std::string(std::strerror(errno)));
    }
    if (n == 0) throw Error(ErrorCode::kProtocolError, "peer closed the stream mid-response");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string ProtocolClient::exchange_raw(const std::string& line) {
  write_line(line + "\n");
  return read_line();
}

json ProtocolClient::roundtrip(json request) {
  if (!request.is_object()) throw Error(ErrorCode::kInvalidArgument, "request must be an object");
  const std::uint64_t id = next_id_++;
  request["id"] = id;
  write_line(request.dump() + "\n");
  const std::string line = read_line();
  json response;
  try {
    response = json::parse(line);
  } catch (const json::parse_error&) {
    throw Error(ErrorCode::kProtocolError, "malformed response line: " + line);
  }
  if (!response.is_object() || !response.contains("ok") || !response["ok"].is_boolean()) {
    throw Error(ErrorCode::kProtocolError, "response lacks a boolean 'ok': " + line);
  }
  if (!response.contains("id") || !response["id"].is_number_unsigned() || response["id"].get<std::uint64_t>() != id) {
    throw Error(ErrorCode::kProtocolError, "response id does not match request id " + std::to_string(id));
  }
  if (!response["ok"].get<bool>()) {
    std::string msg = "unspecified";
    if (response.contains("error") && response["error"].is_string()) msg = response["error"].get<std::string>();
    throw Error(ErrorCode::kPeerError, msg);
  }
  return response;
}

}  // namespace reachopt::driver
