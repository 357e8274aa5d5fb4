#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bearform/geometry.hpp"
#include "bearform/graph.hpp"

namespace bearform {

/// Desired position and its first three time derivatives for one agent.
struct DesiredState {
  Vector3 p = Vector3::Zero();
  Vector3 v = Vector3::Zero();
  Vector3 u = Vector3::Zero();
  Vector3 jerk = Vector3::Zero();
};

/// Desired formation signal. Implementations are pure functions of
/// (agent, t) and may be evaluated concurrently.
class TrajectoryProvider {
 public:
  virtual ~TrajectoryProvider() = default;

  virtual int agent_count() const = 0;
  /// agent is 1-based. Throws UnknownAgent outside 1..agent_count().
  virtual DesiredState evaluate(int agent, double t) const = 0;

 protected:
  void check_agent(int agent) const;
};

/// Four agents, time-varying shape translating along y.
class Scenario1Trajectory final : public TrajectoryProvider {
 public:
  int agent_count() const override { return 4; }
  DesiredState evaluate(int agent, double t) const override;
};

/// Four agents, rigid triangle about the leader rotating about y at 1/2 rad/s
/// while translating along y, with scale 1 + |t - 40| / 20. The scale kink at
/// t = 40 uses right derivatives.
class Scenario2Trajectory final : public TrajectoryProvider {
 public:
  int agent_count() const override { return 4; }
  DesiredState evaluate(int agent, double t) const override;
};

struct CircleParams {
  double a0 = 1.0;       // mean radius [m]
  double a1 = 0.3;       // radius oscillation amplitude [m]
  double omega = 0.5;    // angular rate on the circle [rad/s]
  double omega_a = 0.25; // radius oscillation rate [rad/s]
  std::vector<double> phases{0.0, 2.0943951023931957, 4.1887902047863905};
  double h0 = -1.0;      // NED: 1 m altitude
  double h_rate = -0.01; // NED: climbing at 1 cm/s
  double a_min = 0.1;

  bool operator==(const CircleParams&) const = default;
};

/// p* = (A(t) cos(w t - phi), A(t) sin(w t - phi), h0 + h_rate t) with
/// A(t) = a0 + a1 sin(omega_a t); one phase per agent.
class CircleTrajectory final : public TrajectoryProvider {
 public:
  explicit CircleTrajectory(CircleParams params);
  int agent_count() const override { return static_cast<int>(params_.phases.size()); }
  DesiredState evaluate(int agent, double t) const override;
  const CircleParams& params() const { return params_; }

 private:
  CircleParams params_;
};

struct CrossingParams {
  std::vector<double> center{0.0, 0.0, -1.0};  // leader hover point [m]
  double amplitude = 2.0;       // [m]
  double omega = 0.3;           // sweep through the leader [rad/s]
  double turn_rate = 0.15;      // rotation of the sweep line about z [rad/s]
  double vertical_offset = 0.02;  // closest desired approach [m]

  bool operator==(const CrossingParams&) const = default;
};

/// Two agents: the leader hovers at `center` while the follower's desired
/// position sweeps through it along a slowly turning horizontal line, passing
/// within vertical_offset of the leader twice per period.
class CrossingTrajectory final : public TrajectoryProvider {
 public:
  explicit CrossingTrajectory(CrossingParams params);
  int agent_count() const override { return 2; }
  DesiredState evaluate(int agent, double t) const override;

 private:
  CrossingParams params_;
};

/// Uniformly sampled positions, interpolated by cubic B-splines per
/// component. Derivatives come from finite differences of the interpolant.
class TableTrajectory final : public TrajectoryProvider {
 public:
  /// positions[k][a] is agent a+1 at time t0 + k*dt. Requires >= 4 samples.
  TableTrajectory(double t0, double dt, const std::vector<std::vector<Vector3>>& positions);
  ~TableTrajectory() override;

  /// CSV with header t,p1x,p1y,p1z,p2x,... and uniform time spacing.
  static TableTrajectory from_csv(const std::string& path);

  int agent_count() const override { return agents_; }
  DesiredState evaluate(int agent, double t) const override;
  Vector3 position(int agent, double t) const;
  double t_begin() const { return t0_; }
  double t_end() const { return t_end_; }

 private:
  struct Splines;
  double t0_;
  double t_end_;
  int agents_;
  std::shared_ptr<const Splines> splines_;
};

/// Translates every agent's desired position by a constant offset.
class TranslatedTrajectory final : public TrajectoryProvider {
 public:
  TranslatedTrajectory(std::shared_ptr<const TrajectoryProvider> inner, Vector3 offset);
  int agent_count() const override { return inner_->agent_count(); }
  DesiredState evaluate(int agent, double t) const override;

 private:
  std::shared_ptr<const TrajectoryProvider> inner_;
  Vector3 offset_;
};

/// Central-difference derivatives of the provider's positions. v and u use
/// step h (O(h^2)); the jerk uses a fourth-order seven-point stencil on step
/// max(h, kJerkStep) because a third difference at h = 1e-4 is dominated by
/// round-off.
inline constexpr double kJerkStep = 1e-2;
DesiredState finite_diff_derivatives(const TrajectoryProvider& provider, int agent, double t,
                                     double h = 1e-4);

struct PEParams {
  double window_T = 10.0;
  double mu_min = 0.05;
  double quadrature_dt = 0.01;

  /// Throws InvalidArgument unless window_T > 0, 0 < mu_min < 1 and
  /// 0 < quadrature_dt <= window_T / 100.
  void validate() const;
  bool operator==(const PEParams&) const = default;
};

using BearingSet = std::vector<UnitVector3>;
using BearingFunction = std::function<BearingSet(double)>;

/// Trapezoidal (1/T) * integral over [t0, t0 + T] of sum_j projector(g_j(t)).
Matrix3 pe_window_matrix(const BearingFunction& bearings, double t0, const PEParams& params);

struct AgentPEResult {
  int agent = 0;
  double min_eigenvalue = 0.0;
  double worst_window_start = 0.0;
  bool persistently_exciting = false;
};

struct BPEReport {
  std::vector<AgentPEResult> followers;
  bool all_pe() const;
};

/// Window start times scanned over [0, horizon]: stride window_T / 4, last
/// window ending at or before the horizon (a single window at 0 when the
/// horizon is shorter than one window).
std::vector<double> pe_window_starts(double horizon, const PEParams& params);

/// Bearing function of agent i under the desired formation.
BearingFunction desired_bearings(const TrajectoryProvider& provider, const SensingGraph& graph,
                                 int agent, double min_separation = kDefaultMinSeparation);

/// BPE check over all (follower, window) pairs, OpenMP-parallel. Results are
/// reduced in a fixed order, so they do not depend on the thread count.
BPEReport is_bpe(const TrajectoryProvider& provider, const SensingGraph& graph, double horizon,
                 const PEParams& params, double min_separation = kDefaultMinSeparation);

/// Serial reference for is_bpe.
BPEReport is_bpe_serial(const TrajectoryProvider& provider, const SensingGraph& graph,
                        double horizon, const PEParams& params,
                        double min_separation = kDefaultMinSeparation);

struct DesiredBounds {
  double max_velocity = 0.0;
  double max_acceleration = 0.0;
  double max_jerk = 0.0;
  double min_neighbor_separation = 0.0;
};

/// Samples the provider on [0, horizon] at step dt and records the largest
/// derivative norms and the smallest desired neighbor separation.
DesiredBounds sample_desired_bounds(const TrajectoryProvider& provider, const SensingGraph& graph,
                                    double horizon, double dt);

}  // namespace bearform
