#include "bearform/scenario.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "bearform/error.hpp"

namespace bearform {
namespace {

using nlohmann::json;

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : fmt::format("{}.{}", path, key);
}

std::string index(const std::string& path, std::size_t k) { return fmt::format("{}[{}]", path, k); }

const json& expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path.empty() ? "<root>" : path, "expected an object");
  return j;
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) throw ParseError(join(path, item.key()), "unknown field");
  }
}

const json* find(const json& obj, std::string_view key) {
  const auto it = obj.find(std::string(key));
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path, std::string_view key) {
  const json* v = find(obj, key);
  if (v == nullptr) throw ParseError(join(path, key), "missing required field");
  return *v;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(path, "expected a finite number");
  return x;
}

double number(const json& obj, const std::string& path, std::string_view key) {
  return as_number(require(obj, path, key), join(path, key));
}

double number_or(const json& obj, const std::string& path, std::string_view key, double fallback) {
  const json* v = find(obj, key);
  return v == nullptr ? fallback : as_number(*v, join(path, key));
}

long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  return v.get<long>();
}

std::string string_or(const json& obj, const std::string& path, std::string_view key, std::string fallback) {
  const json* v = find(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_string()) throw ParseError(join(path, key), "expected a string");
  return v->get<std::string>();
}

bool bool_or(const json& obj, const std::string& path, std::string_view key, bool fallback) {
  const json* v = find(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) throw ParseError(join(path, key), "expected true or false");
  return v->get<bool>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_number(v[k], index(path, k)));
  return out;
}

Triple triple(const json& v, const std::string& path) {
  const auto xs = number_list(v, path);
  if (xs.size() != 3) throw ParseError(path, fmt::format("expected 3 numbers, got {}", xs.size()));
  return {xs[0], xs[1], xs[2]};
}

Triple triple_or(const json& obj, const std::string& path, std::string_view key, Triple fallback) {
  const json* v = find(obj, key);
  return v == nullptr ? fallback : triple(*v, join(path, key));
}

ControlGains parse_gains(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"kp", "kd", "ko", "n_gain", "yaw"});
  ControlGains g;
  g.kp = number(j, path, "kp");
  g.kd = number(j, path, "kd");
  g.ko = number_or(j, path, "ko", 0.0);
  g.n_gain = number(j, path, "n_gain");
  g.yaw = number_or(j, path, "yaw", 0.0);
  return g;
}

AgentSpec parse_agent(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"id", "mass", "gains", "initial"});
  AgentSpec a;
  a.id = static_cast<int>(integer(require(j, path, "id"), join(path, "id")));
  a.mass = number_or(j, path, "mass", 1.0);
  if (!(a.mass > 0.0)) throw ParseError(join(path, "mass"), "must be positive");
  a.gains = parse_gains(require(j, path, "gains"), join(path, "gains"));
  const std::string ipath = join(path, "initial");
  const json& init = expect_object(require(j, path, "initial"), ipath);
  reject_unknown(init, ipath, {"p", "v", "rpy"});
  a.p = triple(require(init, ipath, "p"), join(ipath, "p"));
  a.v = triple_or(init, ipath, "v", {});
  a.rpy = triple_or(init, ipath, "rpy", {});
  return a;
}

TrajectorySpec parse_trajectory(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"kind", "params", "offset"});
  TrajectorySpec t;
  t.kind = string_or(j, path, "kind", "");
  t.offset = triple_or(j, path, "offset", {});
  const std::string ppath = join(path, "params");
  static const json kEmpty = json::object();
  const json& params = find(j, "params") != nullptr ? expect_object(j.at("params"), ppath) : kEmpty;
  if (t.kind == "scenario1" || t.kind == "scenario2") {
    reject_unknown(params, ppath, {});
  } else if (t.kind == "circle") {
    reject_unknown(params, ppath, {"A0", "A1", "omega", "omega_A", "phases", "h0", "h_rate", "A_min"});
    auto& c = t.circle;
    c.a0 = number_or(params, ppath, "A0", c.a0);
    c.a1 = number_or(params, ppath, "A1", c.a1);
    c.omega = number_or(params, ppath, "omega", c.omega);
    c.omega_a = number_or(params, ppath, "omega_A", c.omega_a);
    if (const json* ph = find(params, "phases")) c.phases = number_list(*ph, join(ppath, "phases"));
    c.h0 = number_or(params, ppath, "h0", c.h0);
    c.h_rate = number_or(params, ppath, "h_rate", c.h_rate);
    c.a_min = number_or(params, ppath, "A_min", c.a_min);
    if (!(c.a_min > 0.0)) throw ParseError(join(ppath, "A_min"), "must be positive");
    if (c.phases.empty()) throw ParseError(join(ppath, "phases"), "need one phase per agent");
  } else if (t.kind == "crossing") {
    reject_unknown(params, ppath, {"center", "amplitude", "omega", "turn_rate", "vertical_offset"});
    auto& c = t.crossing;
    const Triple center = triple_or(params, ppath, "center", {c.center[0], c.center[1], c.center[2]});
    c.center = {center[0], center[1], center[2]};
    c.amplitude = number_or(params, ppath, "amplitude", c.amplitude);
    c.omega = number_or(params, ppath, "omega", c.omega);
    c.turn_rate = number_or(params, ppath, "turn_rate", c.turn_rate);
    c.vertical_offset = number_or(params, ppath, "vertical_offset", c.vertical_offset);
  } else if (t.kind == "table") {
    reject_unknown(params, ppath, {"path"});
    t.table_path = string_or(params, ppath, "path", "");
    if (t.table_path.empty()) throw ParseError(join(ppath, "path"), "table trajectories need a file path");
  } else {
    throw ParseError(join(path, "kind"),
                     fmt::format("unknown trajectory kind '{}' (scenario1|scenario2|circle|crossing|table)", t.kind));
  }
  return t;
}

CollisionParams parse_collision(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"r", "eps_inner", "eps_outer", "enabled"});
  CollisionParams c;
  c.r = number_or(j, path, "r", c.r);
  c.eps_inner = number_or(j, path, "eps_inner", c.eps_inner);
  c.eps_outer = number_or(j, path, "eps_outer", c.eps_outer);
  c.enabled = bool_or(j, path, "enabled", true);
  if (!(c.r >= 0.0)) throw ParseError(join(path, "r"), "must be non-negative");
  if (!(c.eps_inner > 0.0)) throw ParseError(join(path, "eps_inner"), "must be positive");
  if (!(c.eps_inner < c.eps_outer)) throw ParseError(join(path, "eps_outer"), "must exceed eps_inner");
  return c;
}

SimSpec parse_sim(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"duration", "physics_dt", "control_rate", "gravity", "thrust_guard",
                           "min_separation", "udot_mode", "plant", "noise", "pe", "derivative_bound"});
  SimSpec s;
  s.duration = number(j, path, "duration");
  if (!(s.duration > 0.0)) throw ParseError(join(path, "duration"), "must be positive");
  s.physics_dt = number_or(j, path, "physics_dt", s.physics_dt);
  if (!(s.physics_dt > 0.0 && s.physics_dt <= kMaxPhysicsStep)) {
    throw ParseError(join(path, "physics_dt"), fmt::format("must be in (0, {}]", kMaxPhysicsStep));
  }
  s.control_rate = number_or(j, path, "control_rate", s.control_rate);
  if (!(s.control_rate > 0.0)) throw ParseError(join(path, "control_rate"), "must be positive");
  const double period = 1.0 / s.control_rate;
  const double ratio = std::llround(period / s.physics_dt);
  if (ratio < 1 || std::abs(ratio * s.physics_dt - period) > 1e-9) {
    throw ParseError(join(path, "physics_dt"), "must divide the control period");
  }
  s.gravity = number_or(j, path, "gravity", s.gravity);
  if (!(s.gravity > 0.0)) throw ParseError(join(path, "gravity"), "must be positive");
  s.thrust_guard = number_or(j, path, "thrust_guard", s.thrust_guard);
  if (!(s.thrust_guard > 0.0)) throw ParseError(join(path, "thrust_guard"), "must be positive");
  s.min_separation = number_or(j, path, "min_separation", s.min_separation);
  if (!(s.min_separation > 0.0)) throw ParseError(join(path, "min_separation"), "must be positive");
  s.udot_mode = string_or(j, path, "udot_mode", s.udot_mode);
  if (s.udot_mode != "backward_difference" && s.udot_mode != "feedforward") {
    throw ParseError(join(path, "udot_mode"), "expected backward_difference or feedforward");
  }
  s.plant = string_or(j, path, "plant", s.plant);
  if (s.plant != "quadrotor" && s.plant != "double_integrator") {
    throw ParseError(join(path, "plant"), "expected quadrotor or double_integrator");
  }
  if (const json* nz = find(j, "noise")) {
    const std::string npath = join(path, "noise");
    expect_object(*nz, npath);
    reject_unknown(*nz, npath, {"bearing_sigma", "relvel_sigma", "delay_ticks"});
    s.noise.bearing_sigma = number_or(*nz, npath, "bearing_sigma", 0.0);
    s.noise.relvel_sigma = number_or(*nz, npath, "relvel_sigma", 0.0);
    if (const json* d = find(*nz, "delay_ticks")) s.noise.delay_ticks = static_cast<int>(integer(*d, join(npath, "delay_ticks")));
    if (s.noise.bearing_sigma < 0.0) throw ParseError(join(npath, "bearing_sigma"), "must be non-negative");
    if (s.noise.relvel_sigma < 0.0) throw ParseError(join(npath, "relvel_sigma"), "must be non-negative");
    if (s.noise.delay_ticks < 0) throw ParseError(join(npath, "delay_ticks"), "must be non-negative");
  }
  if (const json* pe = find(j, "pe")) {
    const std::string ppath = join(path, "pe");
    expect_object(*pe, ppath);
    reject_unknown(*pe, ppath, {"window_T", "mu_min", "quadrature_dt"});
    s.pe.window_T = number_or(*pe, ppath, "window_T", s.pe.window_T);
    s.pe.mu_min = number_or(*pe, ppath, "mu_min", s.pe.mu_min);
    s.pe.quadrature_dt = number_or(*pe, ppath, "quadrature_dt", s.pe.quadrature_dt);
    try {
      s.pe.validate();
    } catch (const Error& e) {
      throw ParseError(ppath, e.what());
    }
  }
  s.derivative_bound = number_or(j, path, "derivative_bound", s.derivative_bound);
  return s;
}

nlohmann::ordered_json triple_json(const Triple& t) { return nlohmann::ordered_json::array({t[0], t[1], t[2]}); }

Triple to_triple(const Vector3& v) { return {v.x(), v.y(), v.z()}; }

}  // namespace

ScenarioFile scenario_from_json(const json& doc) {
  expect_object(doc, "");
  reject_unknown(doc, "", {"meta", "agents", "graph", "trajectory", "collision", "sim", "outputs"});
  ScenarioFile s;

  const json& meta = expect_object(require(doc, "", "meta"), "meta");
  reject_unknown(meta, "meta", {"name", "seed", "description"});
  s.name = string_or(meta, "meta", "name", "");
  s.description = string_or(meta, "meta", "description", "");
  if (const json* seed = find(meta, "seed")) {
    if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<long>() >= 0)) {
      throw ParseError("meta.seed", "expected a non-negative integer");
    }
    s.seed = seed->get<std::uint64_t>();
  }

  const json& agents = require(doc, "", "agents");
  if (!agents.is_array() || agents.size() < 2) throw ParseError("agents", "expected an array of at least 2 agents");
  for (std::size_t k = 0; k < agents.size(); ++k) {
    AgentSpec a = parse_agent(agents[k], index("agents", k));
    if (a.id != static_cast<int>(k) + 1) {
      throw ParseError(join(index("agents", k), "id"), fmt::format("expected id {} (leader first, consecutive)", k + 1));
    }
    s.agents.push_back(a);
  }

  const json& graph = expect_object(require(doc, "", "graph"), "graph");
  reject_unknown(graph, "graph", {"neighbors"});
  const json& nb = require(graph, "graph", "neighbors");
  if (!nb.is_array()) throw ParseError("graph.neighbors", "expected one array per agent");
  if (nb.size() != s.agents.size()) {
    throw ParseError("graph.neighbors", fmt::format("expected {} lists, got {}", s.agents.size(), nb.size()));
  }
  for (std::size_t k = 0; k < nb.size(); ++k) {
    const std::string path = index("graph.neighbors", k);
    if (!nb[k].is_array()) throw ParseError(path, "expected an array of agent ids");
    std::vector<int> list;
    for (std::size_t m = 0; m < nb[k].size(); ++m) list.push_back(static_cast<int>(integer(nb[k][m], index(path, m))));
    s.neighbors.push_back(std::move(list));
  }

  s.trajectory = parse_trajectory(require(doc, "", "trajectory"), "trajectory");
  if (const json* c = find(doc, "collision")) s.collision = parse_collision(*c, "collision");
  s.sim = parse_sim(require(doc, "", "sim"), "sim");
  if (const json* out = find(doc, "outputs")) {
    expect_object(*out, "outputs");
    reject_unknown(*out, "outputs", {"csv_path", "summary_path"});
    s.outputs.csv_path = string_or(*out, "outputs", "csv_path", s.outputs.csv_path);
    s.outputs.summary_path = string_or(*out, "outputs", "summary_path", s.outputs.summary_path);
  }
  return s;
}

nlohmann::ordered_json scenario_to_json(const ScenarioFile& s) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["meta"] = {{"name", s.name}, {"seed", s.seed}, {"description", s.description}};
  json agents = json::array();
  for (const auto& a : s.agents) {
    agents.push_back({{"id", a.id},
                      {"mass", a.mass},
                      {"gains",
                       {{"kp", a.gains.kp}, {"kd", a.gains.kd}, {"ko", a.gains.ko},
                        {"n_gain", a.gains.n_gain}, {"yaw", a.gains.yaw}}},
                      {"initial", {{"p", triple_json(a.p)}, {"v", triple_json(a.v)}, {"rpy", triple_json(a.rpy)}}}});
  }
  doc["agents"] = agents;
  doc["graph"] = {{"neighbors", s.neighbors}};

  json traj = {{"kind", s.trajectory.kind}};
  if (s.trajectory.offset != Triple{}) traj["offset"] = triple_json(s.trajectory.offset);
  if (s.trajectory.kind == "circle") {
    const auto& c = s.trajectory.circle;
    traj["params"] = {{"A0", c.a0}, {"A1", c.a1}, {"omega", c.omega}, {"omega_A", c.omega_a},
                      {"phases", c.phases}, {"h0", c.h0}, {"h_rate", c.h_rate}, {"A_min", c.a_min}};
  } else if (s.trajectory.kind == "crossing") {
    const auto& c = s.trajectory.crossing;
    traj["params"] = {{"center", c.center}, {"amplitude", c.amplitude}, {"omega", c.omega},
                      {"turn_rate", c.turn_rate}, {"vertical_offset", c.vertical_offset}};
  } else if (s.trajectory.kind == "table") {
    traj["params"] = {{"path", s.trajectory.table_path}};
  }
  doc["trajectory"] = traj;

  doc["collision"] = {{"r", s.collision.r}, {"eps_inner", s.collision.eps_inner},
                      {"eps_outer", s.collision.eps_outer}, {"enabled", s.collision.enabled}};
  const auto& sim = s.sim;
  doc["sim"] = {{"duration", sim.duration},
                {"physics_dt", sim.physics_dt},
                {"control_rate", sim.control_rate},
                {"gravity", sim.gravity},
                {"thrust_guard", sim.thrust_guard},
                {"min_separation", sim.min_separation},
                {"udot_mode", sim.udot_mode},
                {"plant", sim.plant},
                {"noise",
                 {{"bearing_sigma", sim.noise.bearing_sigma},
                  {"relvel_sigma", sim.noise.relvel_sigma},
                  {"delay_ticks", sim.noise.delay_ticks}}},
                {"pe",
                 {{"window_T", sim.pe.window_T}, {"mu_min", sim.pe.mu_min}, {"quadrature_dt", sim.pe.quadrature_dt}}},
                {"derivative_bound", sim.derivative_bound}};
  doc["outputs"] = {{"csv_path", s.outputs.csv_path}, {"summary_path", s.outputs.summary_path}};
  return doc;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("<file>", fmt::format("cannot open '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("<file>", fmt::format("invalid JSON in '{}': {}", path.string(), e.what()));
  }
  return scenario_from_json(doc);
}

std::shared_ptr<const TrajectoryProvider> make_trajectory(const TrajectorySpec& spec,
                                                          const std::filesystem::path& base_dir) {
  std::shared_ptr<const TrajectoryProvider> base;
  if (spec.kind == "scenario1") {
    base = std::make_shared<Scenario1Trajectory>();
  } else if (spec.kind == "scenario2") {
    base = std::make_shared<Scenario2Trajectory>();
  } else if (spec.kind == "circle") {
    base = std::make_shared<CircleTrajectory>(spec.circle);
  } else if (spec.kind == "crossing") {
    base = std::make_shared<CrossingTrajectory>(spec.crossing);
  } else if (spec.kind == "table") {
    std::filesystem::path p(spec.table_path);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    base = std::make_shared<TableTrajectory>(TableTrajectory::from_csv(p.string()));
  } else {
    throw Error(ErrorCode::InvalidArgument, fmt::format("unknown trajectory kind '{}'", spec.kind));
  }
  if (spec.offset == Triple{}) return base;
  return std::make_shared<TranslatedTrajectory>(base, Vector3(spec.offset[0], spec.offset[1], spec.offset[2]));
}

SimConfig to_sim_config(const ScenarioFile& s, const std::filesystem::path& base_dir) {
  SimConfig cfg;
  cfg.duration = s.sim.duration;
  cfg.physics_dt = s.sim.physics_dt;
  cfg.control_rate = s.sim.control_rate;
  cfg.graph = SensingGraph(s.neighbors);
  for (const auto& a : s.agents) {
    AgentConfig ac;
    ac.params = {a.mass, s.sim.gravity};
    ac.gains = a.gains;
    ac.initial.p = Vector3(a.p[0], a.p[1], a.p[2]);
    ac.initial.v = Vector3(a.v[0], a.v[1], a.v[2]);
    ac.initial.R = from_roll_pitch_yaw(a.rpy[0], a.rpy[1], a.rpy[2]);
    cfg.agents.push_back(ac);
  }
  cfg.trajectory = make_trajectory(s.trajectory, base_dir);
  cfg.collision = s.collision;
  cfg.noise = s.sim.noise;
  cfg.seed = s.seed;
  cfg.udot_mode = s.sim.udot_mode == "feedforward" ? UdotMode::Feedforward : UdotMode::BackwardDifference;
  cfg.plant = s.sim.plant == "double_integrator" ? PlantModel::DoubleIntegrator : PlantModel::Quadrotor;
  cfg.thrust_guard = s.sim.thrust_guard;
  cfg.min_separation = s.sim.min_separation;
  return cfg;
}

namespace {


ControlGains leader_gains() { return {4.0, 4.0, 0.0, 20.0, 0.0}; }

// Leader starts on its reference; followers start at the reference plus
// `offset`, with the reference velocity and level attitude.
ScenarioFile make_bundled(std::string name, std::string description, TrajectorySpec traj,
                          std::vector<std::vector<int>> neighbors, const ControlGains& follower,
                          const Triple& offset) {
  ScenarioFile s;
  s.name = name;
  s.description = std::move(description);
  s.seed = 1;
  s.trajectory = std::move(traj);
  s.neighbors = std::move(neighbors);
  const auto provider = make_trajectory(s.trajectory);
  for (int i = 1; i <= static_cast<int>(s.neighbors.size()); ++i) {
    const auto d = provider->evaluate(i, 0.0);
    AgentSpec a;
    a.id = i;
    a.gains = i == 1 ? leader_gains() : follower;
    a.p = to_triple(d.p);
    a.v = to_triple(d.v);
    if (i > 1) {
      for (int c = 0; c < 3; ++c) a.p[static_cast<std::size_t>(c)] += offset[static_cast<std::size_t>(c)];
    }
    s.agents.push_back(a);
  }
  s.outputs = {name + ".csv", name + "_summary.json"};
  return s;
}

}  // namespace

std::vector<BundledScenario> bundled_scenarios() {
  std::vector<BundledScenario> out;
  const ControlGains sim_gains{1.9, 3.0, 0.4, 20.0, 0.0};
  const Triple sim_offset{0.5, -0.5, 0.3};

  {
    TrajectorySpec t;
    t.kind = "scenario1";
    auto s = make_bundled("scenario1", "4 agents, time-varying shape translating along y; N2={1}, N3={2}, N4={2,3}",
                          t, {{}, {1}, {2}, {2, 3}}, sim_gains, sim_offset);
    s.sim.duration = 50.0;
    out.push_back({"scenario1", "time-varying 4-agent shape translating along y (kp 1.9, kd 3, n 20)", s});
  }
  {
    TrajectorySpec t;
    t.kind = "scenario2";
    auto s = make_bundled("scenario2", "4 agents, rigid shape rotating about and translating along y, rescaled through t=40; chain graph",
                          t, {{}, {1}, {2}, {3}}, sim_gains, sim_offset);
    s.sim.duration = 80.0;
    out.push_back({"scenario2", "rotating, rescaling rigid 4-agent formation on a chain graph", s});
  }
  {
    TrajectorySpec t;
    t.kind = "circle";
    auto s = make_bundled("experiment_circle",
                          "3 agents on a climbing circle with breathing radius; N2={1}, N3={1,2}; 33 Hz control with one tick of delay",
                          t, {{}, {1}, {1, 2}}, ControlGains{5.5, 5.2, 0.4, 5.0, 0.0}, {0.2, -0.2, 0.1});
    s.sim.duration = 60.0;
    s.sim.control_rate = 33.0;
    s.sim.physics_dt = 1.0 / (33.0 * 30.0);
    s.sim.noise = {0.005, 0.02, 1};
    out.push_back({"experiment_circle", "hardware-emulation preset: 3 agents, 33 Hz, delay and measurement noise", s});
  }
  {
    TrajectorySpec t;
    t.kind = "crossing";
    auto s = make_bundled("two_agent_headon",
                          "follower commanded through the hovering leader's position; exercises the collision barrier",
                          t, {{}, {1}}, sim_gains, {0.0, 0.0, 0.0});
    s.sim.duration = 25.0;
    out.push_back({"two_agent_headon", "2 agents, follower's reference sweeps through the leader (collision avoidance)", s});
  }
  return out;
}

std::optional<ScenarioFile> find_bundled(const std::string& name) {
  for (auto& b : bundled_scenarios()) {
    if (b.name == name) return b.scenario;
  }
  return std::nullopt;
}

ScenarioFile translated(ScenarioFile s, const Triple& offset) {
  for (auto& a : s.agents) {
    for (std::size_t c = 0; c < 3; ++c) a.p[c] += offset[c];
  }
  for (std::size_t c = 0; c < 3; ++c) s.trajectory.offset[c] += offset[c];
  return s;
}

}  // namespace bearform
