#include "bearform/trajectory.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <fmt/format.h>

#include "bearform/error.hpp"

namespace bearform {
namespace {

using Complex = std::complex<double>;

// Derivatives 0..3 of f(t) * exp(i (rate t + angle)) given f and its first
// three derivatives at t (Leibniz rule).
std::array<Complex, 4> modulated_rotation(const std::array<double, 4>& f, double rate, double angle) {
  constexpr int kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  const Complex spin = std::polar(1.0, angle);
  const Complex ir(0.0, rate);
  std::array<Complex, 4> out{};
  for (int k = 0; k < 4; ++k) {
    Complex acc = 0.0;
    Complex power = 1.0;
    for (int m = 0; m <= k; ++m) {
      acc += static_cast<double>(kBinom[k][m]) * f[static_cast<std::size_t>(k - m)] * power;
      power *= ir;
    }
    out[static_cast<std::size_t>(k)] = acc * spin;
  }
  return out;
}

}  // namespace

void TrajectoryProvider::check_agent(int agent) const {
  if (agent < 1 || agent > agent_count()) {
    throw Error(ErrorCode::UnknownAgent,
                fmt::format("agent {} outside 1..{}", agent, agent_count()));
  }
}

DesiredState Scenario1Trajectory::evaluate(int agent, double t) const {
  check_agent(agent);
  DesiredState d;
  d.v = Vector3(0.0, 0.2, 0.0);
  switch (agent) {
    case 1: d.p = Vector3(1.0, t / 5.0, 1.0); break;
    case 3: d.p = Vector3(-1.0, t / 5.0, -1.0); break;
    case 4: d.p = Vector3(1.0, t / 5.0, -1.0); break;
    case 2: {
      const double s = std::sin(t);
      const double c = std::cos(t);
      d.p = Vector3(-1.0 - 0.75 * s, t / 5.0, 1.0 + 0.75 * s);
      d.v = Vector3(-0.75 * c, 0.2, 0.75 * c);
      d.u = Vector3(0.75 * s, 0.0, -0.75 * s);
      d.jerk = Vector3(0.75 * c, 0.0, -0.75 * c);
      break;
    }
  }
  return d;
}

DesiredState Scenario2Trajectory::evaluate(int agent, double t) const {
  check_agent(agent);
  DesiredState d;
  d.p = Vector3(0.0, 0.4 * t, 0.0);
  d.v = Vector3(0.0, 0.4, 0.0);
  if (agent == 1) return d;

  // Offset s(t) * R_y(t/2 + alpha) e3 = s(t) * (sin th, 0, cos th); encode as
  // the complex number z + i x so the rotation is exp(i th).
  constexpr double kTwoThirdsPi = 2.0 * std::numbers::pi / 3.0;
  const double alpha = -(agent - 2) * kTwoThirdsPi;
  const double scale = 1.0 + std::abs((t - 40.0) / 20.0);
  const double scale_rate = (t >= 40.0 ? 1.0 : -1.0) / 20.0;
  const auto z = modulated_rotation({scale, scale_rate, 0.0, 0.0}, 0.5, 0.5 * t + alpha);
  auto as_vec = [](const Complex& c) { return Vector3(c.imag(), 0.0, c.real()); };
  d.p += as_vec(z[0]);
  d.v += as_vec(z[1]);
  d.u = as_vec(z[2]);
  d.jerk = as_vec(z[3]);
  return d;
}

CircleTrajectory::CircleTrajectory(CircleParams params) : params_(std::move(params)) {
  if (params_.phases.empty()) throw Error(ErrorCode::InvalidArgument, "circle needs at least one phase");
  if (!(params_.a_min > 0.0)) throw Error(ErrorCode::InvalidArgument, "a_min must be positive");
}

DesiredState CircleTrajectory::evaluate(int agent, double t) const {
  check_agent(agent);
  const auto& cp = params_;
  const double wa = cp.omega_a;
  const double sa = std::sin(wa * t);
  const double ca = std::cos(wa * t);
  const double radius = cp.a0 + cp.a1 * sa;
  if (!(radius >= cp.a_min)) {
    throw Error(ErrorCode::DegenerateRadius,
                fmt::format("radius {:.4f} m below minimum {:.4f} m at t = {}", radius, cp.a_min, t));
  }
  const std::array<double, 4> a{radius, cp.a1 * wa * ca, -cp.a1 * wa * wa * sa,
                                -cp.a1 * wa * wa * wa * ca};
  const double phase = cp.phases[static_cast<std::size_t>(agent - 1)];
  const auto z = modulated_rotation(a, cp.omega, cp.omega * t - phase);
  DesiredState d;
  d.p = Vector3(z[0].real(), z[0].imag(), cp.h0 + cp.h_rate * t);
  d.v = Vector3(z[1].real(), z[1].imag(), cp.h_rate);
  d.u = Vector3(z[2].real(), z[2].imag(), 0.0);
  d.jerk = Vector3(z[3].real(), z[3].imag(), 0.0);
  return d;
}

CrossingTrajectory::CrossingTrajectory(CrossingParams params) : params_(std::move(params)) {
  if (params_.center.size() != 3) throw Error(ErrorCode::InvalidArgument, "center must have 3 components");
}

DesiredState CrossingTrajectory::evaluate(int agent, double t) const {
  check_agent(agent);
  const auto& cp = params_;
  const Vector3 center(cp.center[0], cp.center[1], cp.center[2]);
  DesiredState d;
  d.p = center;
  if (agent == 1) return d;
  const double a = cp.amplitude;
  const double w = cp.omega;
  const double s = std::sin(w * t);
  const double c = std::cos(w * t);
  const auto z = modulated_rotation({a * c, -a * w * s, -a * w * w * c, a * w * w * w * s},
                                    cp.turn_rate, cp.turn_rate * t);
  d.p += Vector3(z[0].real(), z[0].imag(), cp.vertical_offset);
  d.v = Vector3(z[1].real(), z[1].imag(), 0.0);
  d.u = Vector3(z[2].real(), z[2].imag(), 0.0);
  d.jerk = Vector3(z[3].real(), z[3].imag(), 0.0);
  return d;
}

struct TableTrajectory::Splines {
  std::vector<boost::math::interpolators::cardinal_cubic_b_spline<double>> component;  // 3 per agent
};

TableTrajectory::TableTrajectory(double t0, double dt, const std::vector<std::vector<Vector3>>& positions)
    : t0_(t0), t_end_(t0), agents_(0) {
  if (positions.size() < 4) throw Error(ErrorCode::InvalidArgument, "table needs at least 4 samples");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "table time step must be positive");
  agents_ = static_cast<int>(positions.front().size());
  if (agents_ < 1) throw Error(ErrorCode::InvalidArgument, "table has no agents");
  t_end_ = t0 + dt * static_cast<double>(positions.size() - 1);
  auto splines = std::make_shared<Splines>();
  std::vector<double> column(positions.size());
  for (int a = 0; a < agents_; ++a) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t k = 0; k < positions.size(); ++k) {
        if (static_cast<int>(positions[k].size()) != agents_) {
          throw Error(ErrorCode::InvalidArgument, fmt::format("table row {} has wrong agent count", k));
        }
        column[k] = positions[k][static_cast<std::size_t>(a)](c);
      }
      splines->component.emplace_back(column.data(), column.size(), t0, dt);
    }
  }
  splines_ = std::move(splines);
}

TableTrajectory::~TableTrajectory() = default;

TableTrajectory TableTrajectory::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, fmt::format("cannot open table '{}'", path));
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidArgument, "empty table file");
  const auto header_cols = std::count(line.begin(), line.end(), ',') + 1;
  if (header_cols < 4 || (header_cols - 1) % 3 != 0) {
    throw Error(ErrorCode::InvalidArgument, "table header must be t followed by x,y,z per agent");
  }
  const std::size_t agents = static_cast<std::size_t>((header_cols - 1) / 3);
  std::vector<double> times;
  std::vector<std::vector<Vector3>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    if (values.size() != 1 + 3 * agents) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("table row {} has {} columns", rows.size() + 1, values.size()));
    }
    times.push_back(values[0]);
    std::vector<Vector3> row;
    for (std::size_t a = 0; a < agents; ++a) row.emplace_back(values[1 + 3 * a], values[2 + 3 * a], values[3 + 3 * a]);
    rows.push_back(std::move(row));
  }
  if (rows.size() < 4) throw Error(ErrorCode::InvalidArgument, "table needs at least 4 samples");
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double expected = times.front() + dt * static_cast<double>(k);
    if (std::abs(times[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw Error(ErrorCode::InvalidArgument, "table times must be uniformly spaced");
    }
  }
  return TableTrajectory(times.front(), dt, rows);
}

Vector3 TableTrajectory::position(int agent, double t) const {
  check_agent(agent);
  const double tc = std::clamp(t, t0_, t_end_);
  const auto base = static_cast<std::size_t>(3 * (agent - 1));
  return {splines_->component[base](tc), splines_->component[base + 1](tc),
          splines_->component[base + 2](tc)};
}

DesiredState TableTrajectory::evaluate(int agent, double t) const {
  check_agent(agent);
  const double tc = std::clamp(t, t0_, t_end_);
  const auto base = static_cast<std::size_t>(3 * (agent - 1));
  const auto& sp = splines_->component;
  auto accel = [&](double tau) {
    return Vector3(sp[base].double_prime(tau), sp[base + 1].double_prime(tau), sp[base + 2].double_prime(tau));
  };
  DesiredState d;
  d.p = position(agent, tc);
  d.v = Vector3(sp[base].prime(tc), sp[base + 1].prime(tc), sp[base + 2].prime(tc));
  d.u = accel(tc);
  // The cubic's third derivative jumps at knots; a stencil kept inside the
  // table averages across at most one jump.
  const double hj = std::min(kJerkStep, 0.25 * (t_end_ - t0_));
  const double lo = std::max(t0_, std::min(tc - hj, t_end_ - 2.0 * hj));
  d.jerk = (accel(lo + 2.0 * hj) - accel(lo)) / (2.0 * hj);
  return d;
}

TranslatedTrajectory::TranslatedTrajectory(std::shared_ptr<const TrajectoryProvider> inner, Vector3 offset)
    : inner_(std::move(inner)), offset_(std::move(offset)) {}

DesiredState TranslatedTrajectory::evaluate(int agent, double t) const {
  DesiredState d = inner_->evaluate(agent, t);
  d.p += offset_;
  return d;
}

DesiredState finite_diff_derivatives(const TrajectoryProvider& provider, int agent, double t, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  auto pos = [&](double tau) -> Vector3 { return provider.evaluate(agent, tau).p; };
  DesiredState d;
  d.p = pos(t);
  const Vector3 fwd = pos(t + h);
  const Vector3 back = pos(t - h);
  d.v = (fwd - back) / (2.0 * h);
  d.u = (fwd - 2.0 * d.p + back) / (h * h);
  const double hj = std::max(h, kJerkStep);
  const Vector3 f1 = pos(t + hj), f2 = pos(t + 2 * hj), f3 = pos(t + 3 * hj);
  const Vector3 b1 = pos(t - hj), b2 = pos(t - 2 * hj), b3 = pos(t - 3 * hj);
  d.jerk = (-f3 + 8.0 * f2 - 13.0 * f1 + 13.0 * b1 - 8.0 * b2 + b3) / (8.0 * hj * hj * hj);
  return d;
}

void PEParams::validate() const {
  if (!(window_T > 0.0)) throw Error(ErrorCode::InvalidArgument, "PE window_T must be positive");
  if (!(mu_min > 0.0 && mu_min < 1.0)) throw Error(ErrorCode::InvalidArgument, "PE mu_min must be in (0, 1)");
  if (!(quadrature_dt > 0.0 && quadrature_dt <= window_T / 100.0 + 1e-15)) {
    throw Error(ErrorCode::InvalidArgument, "PE quadrature_dt must be in (0, window_T/100]");
  }
}

Matrix3 pe_window_matrix(const BearingFunction& bearings, double t0, const PEParams& params) {
  params.validate();
  const auto steps = static_cast<long>(std::ceil(params.window_T / params.quadrature_dt - 1e-9));
  const double h = params.window_T / static_cast<double>(steps);
  auto sigma = [&](double t) {
    Matrix3 acc = Matrix3::Zero();
    for (const auto& g : bearings(t)) acc += projector(g);
    return acc;
  };
  Matrix3 integral = 0.5 * (sigma(t0) + sigma(t0 + params.window_T));
  for (long k = 1; k < steps; ++k) integral += sigma(t0 + h * static_cast<double>(k));
  return integral * (h / params.window_T);
}

bool BPEReport::all_pe() const {
  return std::all_of(followers.begin(), followers.end(),
                     [](const AgentPEResult& r) { return r.persistently_exciting; });
}

std::vector<double> pe_window_starts(double horizon, const PEParams& params) {
  const double stride = params.window_T / 4.0;
  std::vector<double> starts{0.0};
  for (long k = 1;; ++k) {
    const double s = stride * static_cast<double>(k);
    if (s + params.window_T > horizon + 1e-9) break;
    starts.push_back(s);
  }
  return starts;
}

BearingFunction desired_bearings(const TrajectoryProvider& provider, const SensingGraph& graph,
                                 int agent, double min_separation) {
  const auto nb = graph.neighbors(agent);
  std::vector<int> neighbors(nb.begin(), nb.end());
  return [&provider, agent, neighbors, min_separation](double t) {
    const Vector3 pi = provider.evaluate(agent, t).p;
    BearingSet out;
    out.reserve(neighbors.size());
    for (int j : neighbors) out.push_back(bearing(pi, provider.evaluate(j, t).p, min_separation));
    return out;
  };
}

namespace {

struct WindowResult {
  double eig = 0.0;
  std::exception_ptr error;
};

BPEReport reduce_windows(const SensingGraph& graph, const std::vector<double>& starts,
                         const std::vector<WindowResult>& results, const PEParams& params) {
  BPEReport report;
  const std::size_t nw = starts.size();
  for (int i = 2; i <= graph.size(); ++i) {
    AgentPEResult r;
    r.agent = i;
    r.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < nw; ++w) {
      const auto& wr = results[static_cast<std::size_t>(i - 2) * nw + w];
      if (wr.error) std::rethrow_exception(wr.error);
      if (wr.eig < r.min_eigenvalue) {
        r.min_eigenvalue = wr.eig;
        r.worst_window_start = starts[w];
      }
    }
    r.persistently_exciting = r.min_eigenvalue >= params.mu_min;
    report.followers.push_back(r);
  }
  return report;
}

WindowResult evaluate_window(const BearingFunction& fn, double t0, const PEParams& params) {
  WindowResult wr;
  try {
    wr.eig = min_symmetric_eigenvalue(pe_window_matrix(fn, t0, params));
  } catch (...) {
    wr.error = std::current_exception();
  }
  return wr;
}

}  // namespace

BPEReport is_bpe(const TrajectoryProvider& provider, const SensingGraph& graph, double horizon,
                 const PEParams& params, double min_separation) {
  params.validate();
  const auto starts = pe_window_starts(horizon, params);
  const int followers = std::max(graph.size() - 1, 0);
  std::vector<BearingFunction> fns;
  for (int i = 2; i <= graph.size(); ++i) fns.push_back(desired_bearings(provider, graph, i, min_separation));
  const long nw = static_cast<long>(starts.size());
  const long total = static_cast<long>(followers) * nw;
  std::vector<WindowResult> results(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 4)
  for (long k = 0; k < total; ++k) {
    results[static_cast<std::size_t>(k)] =
        evaluate_window(fns[static_cast<std::size_t>(k / nw)], starts[static_cast<std::size_t>(k % nw)], params);
  }
  return reduce_windows(graph, starts, results, params);
}

BPEReport is_bpe_serial(const TrajectoryProvider& provider, const SensingGraph& graph, double horizon,
                        const PEParams& params, double min_separation) {
  params.validate();
  const auto starts = pe_window_starts(horizon, params);
  std::vector<WindowResult> results;
  for (int i = 2; i <= graph.size(); ++i) {
    const auto fn = desired_bearings(provider, graph, i, min_separation);
    for (double s : starts) results.push_back(evaluate_window(fn, s, params));
  }
  return reduce_windows(graph, starts, results, params);
}

DesiredBounds sample_desired_bounds(const TrajectoryProvider& provider, const SensingGraph& graph,
                                    double horizon, double dt) {
  DesiredBounds b;
  b.min_neighbor_separation = std::numeric_limits<double>::infinity();
  const auto steps = static_cast<long>(std::floor(horizon / dt + 1e-9));
  std::vector<DesiredState> snapshot(static_cast<std::size_t>(provider.agent_count()));
  for (long k = 0; k <= steps; ++k) {
    const double t = dt * static_cast<double>(k);
    for (int a = 1; a <= provider.agent_count(); ++a) {
      const auto d = provider.evaluate(a, t);
      b.max_velocity = std::max(b.max_velocity, d.v.norm());
      b.max_acceleration = std::max(b.max_acceleration, d.u.norm());
      b.max_jerk = std::max(b.max_jerk, d.jerk.norm());
      snapshot[static_cast<std::size_t>(a - 1)] = d;
    }
    for (const auto& e : graph.edges()) {
      const double sep = (snapshot[static_cast<std::size_t>(e.to - 1)].p -
                          snapshot[static_cast<std::size_t>(e.from - 1)].p).norm();
      b.min_neighbor_separation = std::min(b.min_neighbor_separation, sep);
    }
  }
  return b;
}

}  // namespace bearform
