#include "bearform/cli.hpp"

#include <chrono>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "bearform/error.hpp"
#include "bearform/report.hpp"
#include "bearform/sim.hpp"

namespace bearform {
namespace {

constexpr double kBoundsSampleDt = 0.01;

bool finite_bound(double x, double limit) { return std::isfinite(x) && x <= limit; }

}  // namespace

CheckOutcome check_scenario(const ScenarioFile& s, const std::filesystem::path& base_dir) {
  CheckOutcome out;
  auto& report = out.report;
  const int n = static_cast<int>(s.agents.size());

  for (const auto& a : s.agents) {
    const auto& g = a.gains;
    if (a.id == 1) {
      if (!(g.kp > 0.0 && g.kd > 0.0 && g.n_gain > 0.0)) {
        report.add(Severity::Fail, "leader_gains", 1, "kp, kd and n_gain must be positive");
      }
      continue;
    }
    try {
      g.validate_follower();
    } catch (const Error& e) {
      report.add(Severity::Fail, "follower_gains", a.id, e.what());
    }
  }

  SensingGraph graph(s.neighbors);
  const auto topo = validate_topology(graph);
  report.merge(topo);

  std::vector<FeedbackGains> fb;
  for (const auto& a : s.agents) fb.push_back({a.gains.kp, a.gains.kd});
  if (topo.ok()) {
    const auto gains = validate_gains(graph, fb);
    for (const auto& f : gains.findings) {
      // kd/kp sign failures were already reported through validate_follower.
      if (f.severity == Severity::Fail) continue;
      report.findings.push_back(f);
      if (f.severity == Severity::Warn) out.gain_warnings.push_back(fmt::format("agent {}: {}", f.agent, f.message));
    }
  }

  try {
    s.collision.validate();
  } catch (const Error& e) {
    report.add(Severity::Fail, "collision", 0, e.what());
  }

  SimConfig cfg;
  bool have_config = false;
  try {
    cfg = to_sim_config(s, base_dir);
    cfg.validate();
    have_config = true;
  } catch (const Error& e) {
    report.add(Severity::Fail, "sim_config", 0, e.what());
  }
  if (!have_config || !topo.ok()) return out;

  const auto& traj = *cfg.trajectory;
  try {
    out.bpe = is_bpe(traj, graph, s.sim.duration, s.sim.pe, s.sim.min_separation);
    for (const auto& r : out.bpe->followers) {
      report.add(r.persistently_exciting ? Severity::Pass : Severity::Fail, "bearing_pe", r.agent,
                 fmt::format("min window eigenvalue {:.4g} (mu_min {}, worst window at t = {:g} s)",
                             r.min_eigenvalue, s.sim.pe.mu_min, r.worst_window_start));
    }
  } catch (const Error& e) {
    report.add(Severity::Fail, "bearing_pe", 0, e.what());
  }

  try {
    const auto b = sample_desired_bounds(traj, graph, s.sim.duration, kBoundsSampleDt);
    const double lim = s.sim.derivative_bound;
    const bool bounded = finite_bound(b.max_velocity, lim) && finite_bound(b.max_acceleration, lim) &&
                         finite_bound(b.max_jerk, lim);
    report.add(bounded ? Severity::Pass : Severity::Fail, "desired_bounded", 0,
               fmt::format("max |v*| {:.3g}, |u*| {:.3g}, |jerk*| {:.3g} (limit {})", b.max_velocity,
                           b.max_acceleration, b.max_jerk, lim));
    if (s.collision.enabled && b.min_neighbor_separation <= s.collision.r) {
      report.add(Severity::Warn, "desired_separation", 0,
                 fmt::format("desired neighbors come within {:.3g} m, inside the safety margin {} m",
                             b.min_neighbor_separation, s.collision.r));
    }
  } catch (const Error& e) {
    report.add(Severity::Fail, "desired_bounded", 0, e.what());
  }

  if (s.collision.enabled) {
    double closest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        closest = std::min(closest, (cfg.agents[static_cast<std::size_t>(i)].initial.p -
                                     cfg.agents[static_cast<std::size_t>(j)].initial.p)
                                        .norm());
      }
    }
    report.add(closest > s.collision.r ? Severity::Pass : Severity::Fail, "initial_separation", 0,
               fmt::format("closest initial pair {:.3g} m (safety margin {} m)", closest, s.collision.r));
  }
  return out;
}

std::pair<ScenarioFile, std::filesystem::path> resolve_scenario(const std::string& source) {
  namespace fs = std::filesystem;
  const fs::path p(source);
  if (fs::exists(p)) return {load_scenario(p), p.parent_path()};
  if (auto b = find_bundled(source)) return {*b, {}};
  throw ParseError("<file>", fmt::format("'{}' is neither a readable file nor a bundled scenario", source));
}

int cmd_check(const std::string& source, std::ostream& out, std::ostream& err) {
  try {
    const auto [scenario, base] = resolve_scenario(source);
    const auto outcome = check_scenario(scenario, base);
    fmt::print(out, "scenario {} ({} agents)\n", scenario.name, scenario.agents.size());
    out << format_report(outcome.report);
    return outcome.report.ok() ? kExitOk : kExitValidation;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  }
}

int cmd_run(const std::string& source, const RunOverrides& overrides, std::ostream& out, std::ostream& err) {
  ScenarioFile scenario;
  std::filesystem::path base;
  try {
    std::tie(scenario, base) = resolve_scenario(source);
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  }
  if (overrides.seed) scenario.seed = *overrides.seed;
  if (overrides.duration) {
    if (!(*overrides.duration > 0.0)) {
      fmt::print(err, "error: --duration must be positive\n");
      return kExitUsage;
    }
    scenario.sim.duration = *overrides.duration;
  }

  const auto outcome = check_scenario(scenario, base);
  if (!outcome.report.ok()) {
    err << format_report(outcome.report);
    if (!overrides.force) {
      fmt::print(err, "refusing to run a scenario with failed checks (use --force)\n");
      return kExitValidation;
    }
    fmt::print(err, "--force: running despite failed checks\n");
  }
  for (const auto& w : outcome.gain_warnings) fmt::print(err, "warning: {}\n", w);

  SimRecord record;
  const auto start = std::chrono::steady_clock::now();
  try {
    record = run(to_sim_config(scenario, base));
  } catch (const SimulationError& e) {
    fmt::print(err, "simulation aborted at tick {} (agent {}): {}\n", e.tick(), e.agent(), e.what());
    return kExitSimulation;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto metrics = compute_metrics(record);
  metrics.gain_warnings = outcome.gain_warnings;
  metrics.bpe = outcome.bpe;

  const auto dir = overrides.out_dir.value_or(std::filesystem::path{});
  const auto csv_path = dir / scenario.outputs.csv_path;
  const auto summary_path = dir / scenario.outputs.summary_path;
  try {
    write_file_atomic(csv_path, to_csv(record));
    write_file_atomic(summary_path, summary_json(scenario, record, metrics).dump(2) + "\n");
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  }

  fmt::print(out, "{}: {} ticks in {:.2f} s (seed {}, {})\n", scenario.name, record.ticks.size(), elapsed,
             record.seed, record.generator);
  for (const auto& f : metrics.followers) {
    fmt::print(out, "  agent {}: |e_p| initial {:.4f} final {:.4f} max {:.4f} m, |e_v| final {:.4f} m/s, below {} m {}\n",
               f.agent, f.initial_position_error, f.final_position_error, f.max_position_error,
               f.final_velocity_error, metrics.threshold,
               f.time_to_threshold ? fmt::format("from t = {:.2f} s", *f.time_to_threshold) : "never");
  }
  fmt::print(out, "  min inter-agent distance {:.4f} m\n", metrics.min_inter_agent_distance);
  fmt::print(out, "wrote {} and {}\n", csv_path.string(), summary_path.string());
  return kExitOk;
}

int cmd_list_scenarios(std::ostream& out) {
  for (const auto& b : bundled_scenarios()) fmt::print(out, "{:<20} {}\n", b.name, b.summary);
  return kExitOk;
}

int cmd_export(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
  try {
    for (const auto& b : bundled_scenarios()) {
      const auto path = dir / (b.name + ".json");
      write_file_atomic(path, scenario_to_json(b.scenario).dump(2) + "\n");
      fmt::print(out, "wrote {}\n", path.string());
    }
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace bearform
