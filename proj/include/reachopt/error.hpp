#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reachopt {

enum class ErrorCode {
  kDuplicateSeed,
  kDanglingEdge,
  kSelfLoop,
  kAlreadyPresent,
  kNoConnection,
  kUnknownId,
  kBudgetExhausted,
  kAlreadyScored,
  kEmptyGraph,
  kEmptyPool,
  kInvalidMolecule,
  kInvalidArgument,
  kDegenerateData,
  kProtocolError,
  kTimeout,
  kPeerError,
  kEmptyHistory,
  kNoGenerated,
  kConfigError,
  kOracleFailure,
  kIoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the
// message is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace reachopt
