#include "bearform/report.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "bearform/error.hpp"

namespace bearform {
namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kAgentFields[] = {"px",  "py",  "pz",  "vx",  "vy",  "vz",  "r11", "r12",
                                             "r13", "r21", "r22", "r23", "r31", "r32", "r33", "T",
                                             "wx",  "wy",  "wz",  "ubx", "uby", "ubz", "ucx", "ucy",
                                             "ucz"};

void put(std::string& line, double x) {
  line += ',';
  fmt::format_to(std::back_inserter(line), "{:.17g}", x);
}

// JSON has no representation for infinities; absent values become null.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string_view severity_name(Severity s) {
  switch (s) {
    case Severity::Pass: return "PASS";
    case Severity::Warn: return "WARN";
    case Severity::Fail: return "FAIL";
  }
  return "?";
}

}  // namespace

std::vector<std::string> csv_header(int agent_count, const std::vector<Edge>& edges) {
  std::vector<std::string> cols{"t"};
  for (int i = 1; i <= agent_count; ++i) {
    for (auto f : kAgentFields) cols.push_back(fmt::format("a{}_{}", i, f));
  }
  for (int i = 2; i <= agent_count; ++i) {
    for (auto f : {"ep", "ev", "erot"}) cols.push_back(fmt::format("a{}_{}", i, f));
  }
  for (const auto& e : edges) {
    cols.push_back(fmt::format("e{}_{}_d", e.from, e.to));
    cols.push_back(fmt::format("e{}_{}_minus_uc_dot_g", e.from, e.to));
  }
  return cols;
}

void write_csv(std::ostream& out, const SimRecord& record) {
  const int n = record.graph.size();
  const auto header = csv_header(n, record.edges);
  std::string line;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k > 0) line += ',';
    line += header[k];
  }
  out << line << '\n';

  std::vector<std::vector<double>> ep, ev, er;
  for (int i = 2; i <= n; ++i) {
    ep.push_back(position_error_series(record, i));
    ev.push_back(velocity_error_series(record, i));
    er.push_back(rotation_error_series(record, i));
  }
  for (std::size_t k = 0; k < record.ticks.size(); ++k) {
    const auto& tk = record.ticks[k];
    line.clear();
    fmt::format_to(std::back_inserter(line), "{:.17g}", tk.t);
    for (const auto& a : tk.agents) {
      for (int c = 0; c < 3; ++c) put(line, a.p[c]);
      for (int c = 0; c < 3; ++c) put(line, a.v[c]);
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) put(line, a.R(r, c));
      }
      put(line, a.thrust);
      for (int c = 0; c < 3; ++c) put(line, a.omega[c]);
      for (int c = 0; c < 3; ++c) put(line, a.u_b[c]);
      for (int c = 0; c < 3; ++c) put(line, a.u_c[c]);
    }
    for (std::size_t f = 0; f < ep.size(); ++f) {
      put(line, ep[f][k]);
      put(line, ev[f][k]);
      put(line, er[f][k]);
    }
    for (const auto& e : tk.edges) {
      put(line, e.distance);
      put(line, e.minus_uc_dot_g);
    }
    out << line << '\n';
  }
}

std::string to_csv(const SimRecord& record) {
  std::ostringstream s;
  write_csv(s, record);
  return s.str();
}

json metrics_to_json(const MetricsSummary& m) {
  json followers = json::array();
  for (const auto& f : m.followers) {
    followers.push_back({{"agent", f.agent},
                         {"initial_position_error", f.initial_position_error},
                         {"final_position_error", f.final_position_error},
                         {"max_position_error", f.max_position_error},
                         {"final_velocity_error", f.final_velocity_error},
                         {"max_velocity_error", f.max_velocity_error},
                         {"final_rotation_error", f.final_rotation_error},
                         {"max_rotation_error", f.max_rotation_error},
                         {"time_to_threshold", f.time_to_threshold ? json(*f.time_to_threshold) : json(nullptr)}});
  }
  json edges = json::array();
  for (const auto& e : m.edges) {
    edges.push_back({{"edge", {e.edge.from, e.edge.to}},
                     {"min_distance", finite_or_null(e.min_distance)},
                     {"min_range_margin", finite_or_null(e.min_range_margin)},
                     {"max_minus_uc_dot_g", finite_or_null(e.max_minus_uc_dot_g)}});
  }
  json out = {{"threshold", m.threshold},
              {"followers", followers},
              {"edges", edges},
              {"min_inter_agent_distance", finite_or_null(m.min_inter_agent_distance)},
              {"gain_warnings", m.gain_warnings}};
  if (m.bpe) {
    json bpe = json::array();
    for (const auto& r : m.bpe->followers) {
      bpe.push_back({{"agent", r.agent},
                     {"min_window_eigenvalue", r.min_eigenvalue},
                     {"worst_window_start", r.worst_window_start},
                     {"persistently_exciting", r.persistently_exciting}});
    }
    out["bpe"] = {{"all_pe", m.bpe->all_pe()}, {"followers", bpe}};
  } else {
    out["bpe"] = nullptr;
  }
  return out;
}

json summary_json(const ScenarioFile& scenario, const SimRecord& record, const MetricsSummary& metrics) {
  return {{"generator", {{"program", "bearform"}, {"rng", record.generator}, {"seed", record.seed}}},
          {"ticks", record.ticks.size()},
          {"safety_margin", record.safety_margin},
          {"range_channel", "d_ij = |p_ij| - r from ground truth"},
          {"scenario", scenario_to_json(scenario)},
          {"metrics", metrics_to_json(metrics)}};
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, fmt::format("cannot write '{}'", tmp.string()));
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::InvalidArgument, fmt::format("write to '{}' failed", tmp.string()));
  }
  fs::rename(tmp, path);
}

std::string format_report(const ValidationReport& report) {
  std::string out;
  for (const auto& f : report.findings) {
    if (f.agent > 0) {
      fmt::format_to(std::back_inserter(out), "[{}] {:<24} agent {}: {}\n", severity_name(f.severity), f.check,
                     f.agent, f.message);
    } else {
      fmt::format_to(std::back_inserter(out), "[{}] {:<24} {}\n", severity_name(f.severity), f.check, f.message);
    }
  }
  fmt::format_to(std::back_inserter(out), "{} passed, {} warnings, {} failures\n", report.count(Severity::Pass),
                 report.count(Severity::Warn), report.count(Severity::Fail));
  return out;
}

}  // namespace bearform
