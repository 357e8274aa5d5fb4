#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bearform/graph.hpp"
#include "bearform/scenario.hpp"
#include "bearform/trajectory.hpp"

namespace bearform {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,  // hard check failure or malformed scenario
  kExitUsage = 2,
  kExitSimulation = 3,  // run aborted mid-simulation
};

struct CheckOutcome {
  ValidationReport report;
  std::vector<std::string> gain_warnings;
  std::optional<BPEReport> bpe;
};

/// Topology, gains, desired-trajectory excitation and boundedness, and
/// initial-condition feasibility. Never throws for a parsed scenario.
CheckOutcome check_scenario(const ScenarioFile& scenario, const std::filesystem::path& base_dir = {});

/// Loads `source` as a file path, falling back to a bundled scenario name.
/// Returns the scenario and the directory that relative paths resolve
/// against. Throws ParseError.
std::pair<ScenarioFile, std::filesystem::path> resolve_scenario(const std::string& source);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::optional<std::filesystem::path> out_dir;
  bool force = false;
};

int cmd_check(const std::string& source, std::ostream& out, std::ostream& err);
int cmd_run(const std::string& source, const RunOverrides& overrides, std::ostream& out, std::ostream& err);
int cmd_list_scenarios(std::ostream& out);
/// Writes every bundled scenario as <dir>/<name>.json.
int cmd_export(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

}  // namespace bearform
