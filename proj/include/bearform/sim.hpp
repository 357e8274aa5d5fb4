#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bearform/control.hpp"
#include "bearform/dynamics.hpp"
#include "bearform/graph.hpp"
#include "bearform/rng.hpp"
#include "bearform/trajectory.hpp"

namespace bearform {

/// Measurement-layer disturbances.
struct NoiseModel {
  double bearing_sigma = 0.0;  // [rad], per tangent-plane axis
  double relvel_sigma = 0.0;   // [m/s], per component
  int delay_ticks = 0;

  void validate() const;
  bool operator==(const NoiseModel&) const = default;
};

enum class PlantModel {
  Quadrotor,         // full thrust/attitude dynamics with the inner loop
  DoubleIntegrator,  // u applied directly as acceleration
};

struct AgentConfig {
  QuadrotorParams params;
  ControlGains gains;
  QuadrotorState initial;
};

struct SimConfig {
  double duration = 50.0;       // [s]
  double physics_dt = 1e-3;     // [s]
  double control_rate = 100.0;  // [Hz]
  SensingGraph graph;
  std::vector<AgentConfig> agents;
  std::shared_ptr<const TrajectoryProvider> trajectory;
  CollisionParams collision;
  NoiseModel noise;
  std::uint64_t seed = 0;
  UdotMode udot_mode = UdotMode::BackwardDifference;
  PlantModel plant = PlantModel::Quadrotor;
  double thrust_guard = kDefaultThrustGuard;
  double min_separation = kDefaultMinSeparation;
  /// Agents are updated in an OpenMP loop once the formation has at least
  /// this many members; smaller formations run serially.
  int parallel_agent_threshold = 16;

  /// Throws InvalidArgument when the configuration is inconsistent.
  void validate() const;
  double control_period() const { return 1.0 / control_rate; }
  long tick_count() const;
  int physics_steps_per_tick() const;
};

/// Inputs for one follower at one tick. The leader's entry is empty.
struct FollowerInputs {
  FollowerMeasurements meas;
  FollowerReference ref;
};

/// Builds every follower's measurements (from `sensed`, possibly delayed
/// ground truth) and references (from `desired` at the current time).
/// Noise draws are keyed by (tick, agent, neighbor slot). Throws
/// CoincidentAgents when a sensed separation falls below min_separation.
std::vector<FollowerInputs> extract_measurements(std::span<const QuadrotorState> sensed,
                                                 const SensingGraph& graph,
                                                 std::span<const DesiredState> desired,
                                                 const NoiseModel& noise, const Philox4x32& rng,
                                                 long tick, double safety_margin,
                                                 double min_separation = kDefaultMinSeparation);

/// Rotates g by |w| toward w, where w = sigma * (n0 a + n1 b) lies in the
/// tangent plane spanned by the orthonormal pair (a, b) normal to g.
UnitVector3 perturb_bearing(const UnitVector3& g, double sigma, double n0, double n1);

struct AgentSample {
  Vector3 p, v;
  Matrix3 R;
  double thrust = 0.0;
  Vector3 omega, u, u_b, u_c;
  Vector3 p_star, v_star;
  Vector3 r3_star;
};

struct EdgeSample {
  Vector3 bearing;        // ground-truth g_ij (zero if undefined)
  double distance = 0.0;  // |p_ij|
  double range_margin = 0.0;  // |p_ij| - r
  Vector3 p_err, v_err;   // relative position/velocity errors
  double minus_uc_dot_g = 0.0;
  double closing_rate = 0.0;  // g_ij^T v_ij
};

struct TickSample {
  double t = 0.0;
  std::vector<AgentSample> agents;
  std::vector<EdgeSample> edges;
};

struct SimRecord {
  SensingGraph graph;
  std::vector<Edge> edges;
  double safety_margin = 0.0;
  std::string generator{Philox4x32::kName};
  std::uint64_t seed = 0;
  std::vector<TickSample> ticks;
};

/// Closed-loop simulation. Deterministic in (config, seed) and independent of
/// the OpenMP thread count. Aborts with SimulationError on NonFiniteState,
/// SafetyViolated, ThrustSingularity or CoincidentAgents.
SimRecord run(const SimConfig& config);

/// Independent runs in an OpenMP loop; results in input order. The first
/// failing run (by index) rethrows.
std::vector<SimRecord> run_batch(std::span<const SimConfig> configs);

/// Serial reference for run_batch.
std::vector<SimRecord> run_batch_serial(std::span<const SimConfig> configs);

struct FollowerMetrics {
  int agent = 0;
  double initial_position_error = 0.0;
  double final_position_error = 0.0;
  double max_position_error = 0.0;
  double final_velocity_error = 0.0;
  double max_velocity_error = 0.0;
  double final_rotation_error = 0.0;
  double max_rotation_error = 0.0;
  std::optional<double> time_to_threshold;  // start of the final stay below threshold
};

struct EdgeMetrics {
  Edge edge{};
  double min_distance = 0.0;
  double min_range_margin = 0.0;
  double max_minus_uc_dot_g = 0.0;
};

struct MetricsSummary {
  double threshold = 0.05;
  std::vector<FollowerMetrics> followers;
  std::vector<EdgeMetrics> edges;
  double min_inter_agent_distance = 0.0;  // over all pairs, not only edges
  std::vector<std::string> gain_warnings;
  std::optional<BPEReport> bpe;
};

std::vector<double> position_error_series(const SimRecord& record, int agent);
std::vector<double> velocity_error_series(const SimRecord& record, int agent);
/// arccos(clamp(r3^T r3*, -1, 1)) per tick.
std::vector<double> rotation_error_series(const SimRecord& record, int agent);

/// max over samples at or after time t.
double error_envelope(const SimRecord& record, std::span<const double> series, double t);

MetricsSummary compute_metrics(const SimRecord& record, double threshold = 0.05);

}  // namespace bearform
