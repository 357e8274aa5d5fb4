#include "bearform/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <fmt/format.h>

#include "bearform/error.hpp"

namespace bearform {
namespace {

enum NoisePurpose : std::uint32_t { kBearingNoise = 0, kVelocityNoise = 1 };

// Runs body(a) for agents 1..n, in parallel when `parallel` is set. The first
// failure by agent index is rethrown as a SimulationError for `tick`.
template <typename Body>
void for_each_agent(int n, bool parallel, long tick, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (parallel)
  for (int a = 1; a <= n; ++a) {
    try {
      body(a);
    } catch (...) {
      errors[static_cast<std::size_t>(a - 1)] = std::current_exception();
    }
  }
  for (int a = 1; a <= n; ++a) {
    if (!errors[static_cast<std::size_t>(a - 1)]) continue;
    try {
      std::rethrow_exception(errors[static_cast<std::size_t>(a - 1)]);
    } catch (const SimulationError&) {
      throw;
    } catch (const Error& e) {
      throw SimulationError(e.code(), tick, a, e.what());
    }
  }
}

std::vector<EdgeSample> sample_edges(const SimConfig& cfg, const std::vector<Edge>& edges,
                                     const std::vector<AgentSample>& agents) {
  std::vector<EdgeSample> out;
  out.reserve(edges.size());
  for (const auto& e : edges) {
    const auto& si = agents[static_cast<std::size_t>(e.from - 1)];
    const auto& sj = agents[static_cast<std::size_t>(e.to - 1)];
    EdgeSample s;
    const Vector3 rel = sj.p - si.p;
    const Vector3 rel_v = sj.v - si.v;
    s.distance = rel.norm();
    s.range_margin = s.distance - cfg.collision.r;
    s.bearing = s.distance >= cfg.min_separation ? Vector3(rel / s.distance) : Vector3::Zero();
    s.p_err = rel - (sj.p_star - si.p_star);
    s.v_err = rel_v - (sj.v_star - si.v_star);
    s.minus_uc_dot_g = -si.u_c.dot(s.bearing);
    s.closing_rate = s.bearing.dot(rel_v);
    out.push_back(s);
  }
  return out;
}

}  // namespace

void NoiseModel::validate() const {
  if (!(bearing_sigma >= 0.0) || !(relvel_sigma >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "noise sigmas must be non-negative");
  }
  if (delay_ticks < 0) throw Error(ErrorCode::InvalidArgument, "delay_ticks must be non-negative");
}

long SimConfig::tick_count() const {
  return std::max(1L, static_cast<long>(std::llround(duration * control_rate)));
}

int SimConfig::physics_steps_per_tick() const {
  return static_cast<int>(std::llround(control_period() / physics_dt));
}

void SimConfig::validate() const {
  if (!(duration > 0.0)) throw Error(ErrorCode::InvalidArgument, "duration must be positive");
  if (!(control_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "control_rate must be positive");
  if (!(physics_dt > 0.0 && physics_dt <= kMaxPhysicsStep)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("physics_dt must be in (0, {}]", kMaxPhysicsStep));
  }
  const int steps = physics_steps_per_tick();
  if (steps < 1 || std::abs(steps * physics_dt - control_period()) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("physics_dt {} does not divide the control period {}", physics_dt, control_period()));
  }
  if (!trajectory) throw Error(ErrorCode::InvalidArgument, "no trajectory provider");
  const int n = graph.size();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "empty sensing graph");
  if (static_cast<int>(agents.size()) != n) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("{} agent configs for {} graph nodes", agents.size(), n));
  }
  if (trajectory->agent_count() < n) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("trajectory covers {} agents, graph has {}", trajectory->agent_count(), n));
  }
  for (const auto& a : agents) a.params.validate();
  for (int i = 2; i <= n; ++i) agents[static_cast<std::size_t>(i - 1)].gains.validate_follower();
  collision.validate();
  noise.validate();
  if (!(thrust_guard > 0.0)) throw Error(ErrorCode::InvalidArgument, "thrust_guard must be positive");
  if (!(min_separation > 0.0)) throw Error(ErrorCode::InvalidArgument, "min_separation must be positive");
}

UnitVector3 perturb_bearing(const UnitVector3& g, double sigma, double n0, double n1) {
  if (sigma == 0.0) return g;
  const Vector3& gv = g.vec();
  Eigen::Index axis = 0;
  gv.cwiseAbs().minCoeff(&axis);
  const Vector3 a = gv.cross(Vector3::Unit(axis)).normalized();
  const Vector3 b = gv.cross(a);
  const Vector3 w = sigma * (n0 * a + n1 * b);
  const double angle = w.norm();
  if (angle == 0.0) return g;
  return UnitVector3::normalized(std::cos(angle) * gv + std::sin(angle) * (w / angle));
}

std::vector<FollowerInputs> extract_measurements(std::span<const QuadrotorState> sensed,
                                                 const SensingGraph& graph,
                                                 std::span<const DesiredState> desired,
                                                 const NoiseModel& noise, const Philox4x32& rng,
                                                 long tick, double safety_margin, double min_separation) {
  const int n = graph.size();
  std::vector<FollowerInputs> out(static_cast<std::size_t>(n));
  const auto tick32 = static_cast<std::uint32_t>(tick);
  for (int i = 2; i <= n; ++i) {
    const auto& si = sensed[static_cast<std::size_t>(i - 1)];
    const auto& di = desired[static_cast<std::size_t>(i - 1)];
    auto& fi = out[static_cast<std::size_t>(i - 1)];
    fi.meas.attitude = si.R;
    fi.ref.u_star = di.u;
    fi.ref.jerk_star = di.jerk;
    std::uint32_t slot = 0;
    for (int j : graph.neighbors(i)) {
      const auto& sj = sensed[static_cast<std::size_t>(j - 1)];
      const auto& dj = desired[static_cast<std::size_t>(j - 1)];
      NeighborMeasurement m;
      m.neighbor = j;
      try {
        m.bearing = bearing(si.p, sj.p, min_separation);
      } catch (const Error& e) {
        throw Error(e.code(), fmt::format("agent {} -> {}: {}", i, j, e.what()));
      }
      m.relative_velocity = sj.v - si.v;
      m.range_margin = (sj.p - si.p).norm() - safety_margin;
      const std::uint32_t agent = static_cast<std::uint32_t>(i);
      if (noise.bearing_sigma > 0.0) {
        const auto z = rng.normals({tick32, agent, slot, kBearingNoise});
        m.bearing = perturb_bearing(m.bearing, noise.bearing_sigma, z[0], z[1]);
      }
      if (noise.relvel_sigma > 0.0) {
        const auto z = rng.normals({tick32, agent, slot, kVelocityNoise});
        m.relative_velocity += noise.relvel_sigma * Vector3(z[0], z[1], z[2]);
      }
      fi.meas.neighbors.push_back(m);
      fi.ref.neighbors.push_back({j, dj.p - di.p, dj.v - di.v});
      ++slot;
    }
  }
  return out;
}

SimRecord run(const SimConfig& cfg) {
  cfg.validate();
  const int n = cfg.graph.size();
  const long ticks = cfg.tick_count();
  const int substeps = cfg.physics_steps_per_tick();
  const double dt_ctrl = cfg.control_period();
  const bool parallel = n >= cfg.parallel_agent_threshold;
  const Philox4x32 rng(cfg.seed);
  const auto sz = static_cast<std::size_t>(n);

  SimRecord record;
  record.graph = cfg.graph;
  record.edges = cfg.graph.edges();
  record.safety_margin = cfg.collision.r;
  record.seed = cfg.seed;
  record.ticks.reserve(static_cast<std::size_t>(ticks));

  std::vector<QuadrotorState> states(sz);
  for (std::size_t a = 0; a < sz; ++a) states[a] = cfg.agents[a].initial;

  // history[k % (delay + 1)] holds the ground truth at tick k.
  const auto depth = static_cast<std::size_t>(cfg.noise.delay_ticks + 1);
  std::vector<std::vector<QuadrotorState>> history(depth);
  std::vector<std::optional<Vector3>> prev_u(sz);
  std::vector<DesiredState> desired(sz);
  std::vector<ControlInput> commands(sz);
  std::vector<AgentSample> samples(sz);

  for (long k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * dt_ctrl;
    for (int a = 1; a <= n; ++a) desired[static_cast<std::size_t>(a - 1)] = cfg.trajectory->evaluate(a, t);

    history[static_cast<std::size_t>(k) % depth] = states;
    const long sensed_tick = std::max(0L, k - cfg.noise.delay_ticks);
    const auto& sensed = history[static_cast<std::size_t>(sensed_tick) % depth];

    std::vector<FollowerInputs> inputs;
    try {
      inputs = extract_measurements(sensed, cfg.graph, desired, cfg.noise, rng, k, cfg.collision.r,
                                    cfg.min_separation);
    } catch (const Error& e) {
      throw SimulationError(e.code(), k, 0, e.what());
    }

    for_each_agent(n, parallel, k, [&](int a) {
      const auto idx = static_cast<std::size_t>(a - 1);
      const auto& agent = cfg.agents[idx];
      AgentSample& s = samples[idx];
      VirtualAcceleration va;
      if (a == 1) {
        va = leader_control(sensed[0], desired[0], agent.gains);
        s.u_b = va.u;
        s.u_c = Vector3::Zero();
      } else {
        const auto cmd = follower_control(inputs[idx].meas, inputs[idx].ref, cfg.collision, agent.gains,
                                          prev_u[idx], dt_ctrl, cfg.udot_mode);
        va = cmd.va;
        s.u_b = cmd.u_b;
        s.u_c = cmd.u_c;
      }
      prev_u[idx] = va.u;
      s.u = va.u;
      if (cfg.plant == PlantModel::Quadrotor) {
        const auto il = inner_loop(va, sensed[idx].R, agent.params, agent.gains, cfg.thrust_guard);
        commands[idx] = il.input;
        s.r3_star = il.r3_star.vec();
      } else {
        const Vector3 dir = agent.params.gravity * e3() - va.u;
        s.r3_star = dir.norm() > 0.0 ? Vector3(dir.normalized()) : e3();
        commands[idx] = ControlInput{agent.params.mass * dir.norm(), Vector3::Zero()};
      }
      s.thrust = commands[idx].thrust;
      s.omega = commands[idx].omega;
      s.p = states[idx].p;
      s.v = states[idx].v;
      s.R = states[idx].R.matrix();
      s.p_star = desired[idx].p;
      s.v_star = desired[idx].v;
    });

    TickSample tick;
    tick.t = t;
    tick.agents = samples;
    tick.edges = sample_edges(cfg, record.edges, samples);
    record.ticks.push_back(std::move(tick));

    for_each_agent(n, parallel, k, [&](int a) {
      const auto idx = static_cast<std::size_t>(a - 1);
      for (int s = 0; s < substeps; ++s) {
        if (cfg.plant == PlantModel::Quadrotor) {
          states[idx] = step(states[idx], commands[idx], cfg.agents[idx].params, cfg.physics_dt);
        } else {
          states[idx] = double_integrator_step(states[idx], samples[idx].u, cfg.physics_dt);
        }
      }
    });
  }
  return record;
}

namespace {

std::vector<SimRecord> collect(std::vector<SimRecord>&& records, std::vector<std::exception_ptr>& errors) {
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return std::move(records);
}

}  // namespace

std::vector<SimRecord> run_batch(std::span<const SimConfig> configs) {
  const long count = static_cast<long>(configs.size());
  std::vector<SimRecord> records(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < count; ++k) {
    try {
      records[static_cast<std::size_t>(k)] = run(configs[static_cast<std::size_t>(k)]);
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  return collect(std::move(records), errors);
}

std::vector<SimRecord> run_batch_serial(std::span<const SimConfig> configs) {
  std::vector<SimRecord> records;
  records.reserve(configs.size());
  for (const auto& c : configs) records.push_back(run(c));
  return records;
}

std::vector<double> position_error_series(const SimRecord& record, int agent) {
  std::vector<double> out;
  out.reserve(record.ticks.size());
  for (const auto& tk : record.ticks) {
    const auto& s = tk.agents[static_cast<std::size_t>(agent - 1)];
    out.push_back((s.p - s.p_star).norm());
  }
  return out;
}

std::vector<double> velocity_error_series(const SimRecord& record, int agent) {
  std::vector<double> out;
  out.reserve(record.ticks.size());
  for (const auto& tk : record.ticks) {
    const auto& s = tk.agents[static_cast<std::size_t>(agent - 1)];
    out.push_back((s.v - s.v_star).norm());
  }
  return out;
}

std::vector<double> rotation_error_series(const SimRecord& record, int agent) {
  std::vector<double> out;
  out.reserve(record.ticks.size());
  for (const auto& tk : record.ticks) {
    const auto& s = tk.agents[static_cast<std::size_t>(agent - 1)];
    out.push_back(std::acos(std::clamp(s.R.col(2).dot(s.r3_star), -1.0, 1.0)));
  }
  return out;
}

double error_envelope(const SimRecord& record, std::span<const double> series, double t) {
  double env = 0.0;
  for (std::size_t k = 0; k < series.size() && k < record.ticks.size(); ++k) {
    if (record.ticks[k].t >= t - 1e-12) env = std::max(env, series[k]);
  }
  return env;
}

MetricsSummary compute_metrics(const SimRecord& record, double threshold) {
  if (record.ticks.empty()) throw Error(ErrorCode::InvalidArgument, "empty simulation record");
  MetricsSummary m;
  m.threshold = threshold;
  const int n = record.graph.size();
  for (int i = 2; i <= n; ++i) {
    const auto ep = position_error_series(record, i);
    const auto ev = velocity_error_series(record, i);
    const auto er = rotation_error_series(record, i);
    FollowerMetrics f;
    f.agent = i;
    f.initial_position_error = ep.front();
    f.final_position_error = ep.back();
    f.max_position_error = *std::max_element(ep.begin(), ep.end());
    f.final_velocity_error = ev.back();
    f.max_velocity_error = *std::max_element(ev.begin(), ev.end());
    f.final_rotation_error = er.back();
    f.max_rotation_error = *std::max_element(er.begin(), er.end());
    // Earliest tick after which the error never again reaches the threshold.
    std::size_t k = ep.size();
    while (k > 0 && ep[k - 1] < threshold) --k;
    if (k < ep.size()) f.time_to_threshold = record.ticks[k].t;
    m.followers.push_back(f);
  }
  for (std::size_t e = 0; e < record.edges.size(); ++e) {
    EdgeMetrics em;
    em.edge = record.edges[e];
    em.min_distance = std::numeric_limits<double>::infinity();
    em.min_range_margin = std::numeric_limits<double>::infinity();
    em.max_minus_uc_dot_g = -std::numeric_limits<double>::infinity();
    for (const auto& tk : record.ticks) {
      em.min_distance = std::min(em.min_distance, tk.edges[e].distance);
      em.min_range_margin = std::min(em.min_range_margin, tk.edges[e].range_margin);
      em.max_minus_uc_dot_g = std::max(em.max_minus_uc_dot_g, tk.edges[e].minus_uc_dot_g);
    }
    m.edges.push_back(em);
  }
  m.min_inter_agent_distance = std::numeric_limits<double>::infinity();
  for (const auto& tk : record.ticks) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        m.min_inter_agent_distance = std::min(
            m.min_inter_agent_distance,
            (tk.agents[static_cast<std::size_t>(i)].p - tk.agents[static_cast<std::size_t>(j)].p).norm());
      }
    }
  }
  if (n < 2) m.min_inter_agent_distance = 0.0;
  return m;
}

}  // namespace bearform
