#include "hypercover/trace.hpp"

#include <string>

#include "hypercover/errors.hpp"

namespace hypercover {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::InitReport: return "InitReport";
    case Phase::InitDeal: return "InitDeal";
    case Phase::Tighten: return "Tighten";
    case Phase::Halve: return "Halve";
    case Phase::Decide: return "Decide";
    case Phase::Apply: return "Apply";
  }
  return "Unknown";
}

Phase phase_from_string(std::string_view name) {
  for (auto p : {Phase::InitReport, Phase::InitDeal, Phase::Tighten, Phase::Halve, Phase::Decide, Phase::Apply}) {
    if (to_string(p) == name) return p;
  }
  throw Error(ErrorCode::BadInput, "unknown phase '" + std::string(name) + "'");
}

}  // namespace hypercover
