#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bearform/control.hpp"
#include "bearform/sim.hpp"
#include "bearform/trajectory.hpp"

namespace bearform {

using Triple = std::array<double, 3>;

struct AgentSpec {
  int id = 1;
  double mass = 1.0;
  ControlGains gains;
  Triple p{};
  Triple v{};
  Triple rpy{};  // roll, pitch, yaw [rad], Z-Y-X intrinsic

  bool operator==(const AgentSpec&) const = default;
};

struct TrajectorySpec {
  std::string kind = "scenario1";  // scenario1 | scenario2 | circle | crossing | table
  CircleParams circle;             // kind == circle
  CrossingParams crossing;         // kind == crossing
  std::string table_path;          // kind == table, relative to the scenario file
  Triple offset{};                 // rigid translation of the whole desired formation

  bool operator==(const TrajectorySpec&) const = default;
};

struct SimSpec {
  double duration = 50.0;
  double physics_dt = 1e-3;
  double control_rate = 100.0;
  double gravity = 9.81;
  double thrust_guard = kDefaultThrustGuard;
  double min_separation = kDefaultMinSeparation;
  std::string udot_mode = "backward_difference";  // | feedforward
  std::string plant = "quadrotor";                // | double_integrator
  NoiseModel noise;
  PEParams pe;
  double derivative_bound = 100.0;  // bound on |v*|, |u*|, |jerk*| for the check command

  bool operator==(const SimSpec&) const = default;
};

struct OutputSpec {
  std::string csv_path = "run.csv";
  std::string summary_path = "summary.json";

  bool operator==(const OutputSpec&) const = default;
};

/// In-memory form of a scenario document.
struct ScenarioFile {
  std::string name;
  std::string description;
  std::uint64_t seed = 0;
  std::vector<AgentSpec> agents;
  std::vector<std::vector<int>> neighbors;  // neighbors[k] for agent k + 1
  TrajectorySpec trajectory;
  CollisionParams collision;
  SimSpec sim;
  OutputSpec outputs;

  bool operator==(const ScenarioFile&) const = default;
};

/// Throws ParseError naming the offending field path. Unknown keys are
/// rejected so that typos never silently fall back to defaults.
ScenarioFile scenario_from_json(const nlohmann::json& doc);
/// Fields in document order (meta, agents, graph, ...).
nlohmann::ordered_json scenario_to_json(const ScenarioFile& scenario);

ScenarioFile load_scenario(const std::filesystem::path& path);

std::shared_ptr<const TrajectoryProvider> make_trajectory(const TrajectorySpec& spec,
                                                          const std::filesystem::path& base_dir = {});

/// Converts to the simulator's configuration; base_dir resolves table paths.
SimConfig to_sim_config(const ScenarioFile& scenario, const std::filesystem::path& base_dir = {});

struct BundledScenario {
  std::string name;
  std::string summary;
  ScenarioFile scenario;
};

std::vector<BundledScenario> bundled_scenarios();
std::optional<ScenarioFile> find_bundled(const std::string& name);

/// Rigidly translates every initial position and the desired formation.
ScenarioFile translated(ScenarioFile scenario, const Triple& offset);

}  // namespace bearform
