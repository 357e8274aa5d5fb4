#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bearform {

enum class ErrorCode {
  InvalidArgument,
  CoincidentAgents,
  DegenerateYaw,
  InvalidGain,
  UnknownAgent,
  DegenerateRadius,
  NonFiniteState,
  NeighborMismatch,
  NonPositiveDistance,
  SafetyViolated,
  ThrustSingularity,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure the library reports. The code lets callers
/// branch on the failure class without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Scenario-file failure qualified by the JSON field path, e.g.
/// `agents[2].gains.kd`.
class ParseError : public Error {
 public:
  ParseError(std::string field_path, const std::string& message);

  const std::string& field_path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A simulation abort: carries the control tick and the agent that tripped it
/// alongside the original failure code.
class SimulationError : public Error {
 public:
  SimulationError(ErrorCode cause, long tick, int agent, const std::string& detail);

  long tick() const noexcept { return tick_; }
  int agent() const noexcept { return agent_; }

 private:
  long tick_;
  int agent_;
};

}  // namespace bearform
