#include "hypercover/errors.hpp"

namespace hypercover {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyEdge: return "EmptyEdge";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::DuplicateVertexInEdge: return "DuplicateVertexInEdge";
    case ErrorCode::UncoverableElement: return "UncoverableElement";
    case ErrorCode::NonAdjacentSend: return "NonAdjacentSend";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::ZeroDual: return "ZeroDual";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::RankGuardExceeded: return "RankGuardExceeded";
    case ErrorCode::LiftInfeasible: return "LiftInfeasible";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

}  // namespace hypercover
