#include "reachopt/error.hpp"

namespace reachopt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDuplicateSeed: return "DuplicateSeed";
    case ErrorCode::kDanglingEdge: return "DanglingEdge";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kAlreadyPresent: return "AlreadyPresent";
    case ErrorCode::kNoConnection: return "NoConnection";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kBudgetExhausted: return "BudgetExhausted";
    case ErrorCode::kAlreadyScored: return "AlreadyScored";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kEmptyPool: return "EmptyPool";
    case ErrorCode::kInvalidMolecule: return "InvalidMolecule";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kPeerError: return "PeerError";
    case ErrorCode::kEmptyHistory: return "EmptyHistory";
    case ErrorCode::kNoGenerated: return "NoGenerated";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kOracleFailure: return "OracleFailure";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace reachopt
