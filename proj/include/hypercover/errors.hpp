#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypercover {

enum class ErrorCode {
  // instance validation
  EmptyEdge,
  UnknownVertex,
  NonPositiveWeight,
  DuplicateVertexInEdge,
  UncoverableElement,
  // engine / protocol
  NonAdjacentSend,
  CapExceeded,
  BadEpsilon,
  InvariantViolation,
  // certification / oracle
  ZeroDual,
  TooLarge,
  Infeasible,
  // covering programs
  NegativeEntry,
  RankGuardExceeded,
  LiftInfeasible,
  // io
  BadInput,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hypercover
