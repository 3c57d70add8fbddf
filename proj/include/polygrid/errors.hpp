#pragma once

#include <stdexcept>
#include <string>

namespace polygrid {

/// Failure categories surfaced by the library.
enum class ErrorCode {
  InvalidArgument,
  InvalidMatrix,
  ShapeMismatch,
  SingularMatrix,
  SingularBlock,
  InvalidPartition,
  InvalidPhaseCount,
  UnknownNode,
  InvalidCut,
  SingularBranch,
  PreconditionViolated,
  InvalidSubset,
  InfeasibleReduction,
  InfeasibleHybrid,
  NothingToAugment,
  InvalidLineParameters,
  InvalidTransformerParameters,
  InvalidCompensator,
  HypothesisViolation,
  ParseError,
  IoError,
};

constexpr const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::InvalidPhaseCount: return "InvalidPhaseCount";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::InvalidCut: return "InvalidCut";
    case ErrorCode::SingularBranch: return "SingularBranch";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InvalidSubset: return "InvalidSubset";
    case ErrorCode::InfeasibleReduction: return "InfeasibleReduction";
    case ErrorCode::InfeasibleHybrid: return "InfeasibleHybrid";
    case ErrorCode::NothingToAugment: return "NothingToAugment";
    case ErrorCode::InvalidLineParameters: return "InvalidLineParameters";
    case ErrorCode::InvalidTransformerParameters: return "InvalidTransformerParameters";
    case ErrorCode::InvalidCompensator: return "InvalidCompensator";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

/// Exception type carrying a stable error code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polygrid
