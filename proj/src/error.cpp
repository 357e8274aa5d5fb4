#include "bearform/error.hpp"

#include <fmt/format.h>

namespace bearform {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CoincidentAgents: return "CoincidentAgents";
    case ErrorCode::DegenerateYaw: return "DegenerateYaw";
    case ErrorCode::InvalidGain: return "InvalidGain";
    case ErrorCode::UnknownAgent: return "UnknownAgent";
    case ErrorCode::DegenerateRadius: return "DegenerateRadius";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::NeighborMismatch: return "NeighborMismatch";
    case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorCode::SafetyViolated: return "SafetyViolated";
    case ErrorCode::ThrustSingularity: return "ThrustSingularity";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(fmt::format("{}: {}", to_string(code), message)), code_(code) {}

ParseError::ParseError(std::string field_path, const std::string& message)
    : Error(ErrorCode::ParseError, fmt::format("{}: {}", field_path, message)),
      path_(std::move(field_path)) {}

SimulationError::SimulationError(ErrorCode cause, long tick, int agent, const std::string& detail)
    : Error(cause, fmt::format("aborted at tick {} (agent {}): {}", tick, agent, detail)),
      tick_(tick),
      agent_(agent) {}

}  // namespace bearform
