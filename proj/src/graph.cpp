#include "bearform/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "bearform/error.hpp"

namespace bearform {

SensingGraph::SensingGraph(std::vector<std::vector<int>> lists) : lists_(std::move(lists)) {}

SensingGraph SensingGraph::chain(int n) {
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 2; i <= n; ++i) lists[static_cast<std::size_t>(i - 1)] = {i - 1};
  return SensingGraph(std::move(lists));
}

std::span<const int> SensingGraph::neighbors(int agent) const {
  if (agent < 1 || agent > size()) {
    throw Error(ErrorCode::UnknownAgent, fmt::format("agent {} not in graph of size {}", agent, size()));
  }
  return lists_[static_cast<std::size_t>(agent - 1)];
}

std::vector<Edge> SensingGraph::edges() const {
  std::vector<Edge> out;
  for (int i = 1; i <= size(); ++i) {
    for (int j : neighbors(i)) out.push_back({i, j});
  }
  return out;
}

bool ValidationReport::ok() const { return count(Severity::Fail) == 0; }
bool ValidationReport::has_warnings() const { return count(Severity::Warn) > 0; }

int ValidationReport::count(Severity s) const {
  return static_cast<int>(std::count_if(findings.begin(), findings.end(),
                                        [s](const Finding& f) { return f.severity == s; }));
}

void ValidationReport::add(Severity s, std::string check, int agent, std::string message) {
  findings.push_back({s, std::move(check), agent, std::move(message)});
}

void ValidationReport::merge(const ValidationReport& other) {
  findings.insert(findings.end(), other.findings.begin(), other.findings.end());
}

std::vector<bool> leader_reachability(const SensingGraph& graph) {
  const int n = graph.size();
  std::vector<bool> reach(static_cast<std::size_t>(n), false);
  if (n == 0) return reach;
  // Reverse BFS from the leader over "j is sensed by i" links.
  std::vector<std::vector<int>> sensed_by(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    for (int j : graph.neighbors(i)) {
      if (j >= 1 && j <= n) sensed_by[static_cast<std::size_t>(j - 1)].push_back(i);
    }
  }
  std::queue<int> frontier;
  reach[0] = true;
  frontier.push(1);
  while (!frontier.empty()) {
    const int j = frontier.front();
    frontier.pop();
    for (int i : sensed_by[static_cast<std::size_t>(j - 1)]) {
      if (!reach[static_cast<std::size_t>(i - 1)]) {
        reach[static_cast<std::size_t>(i - 1)] = true;
        frontier.push(i);
      }
    }
  }
  return reach;
}

ValidationReport validate_topology(const SensingGraph& graph) {
  ValidationReport report;
  const int n = graph.size();
  if (n < 2) {
    report.add(Severity::Fail, "agent_count", 0, fmt::format("need at least 2 agents, got {}", n));
    return report;
  }
  if (graph.cardinality(1) != 0) {
    report.add(Severity::Fail, "leader_senses_nothing", 1,
               fmt::format("leader must have no neighbors, has {}", graph.neighbors(1)));
  }
  for (int i = 2; i <= n; ++i) {
    const auto nb = graph.neighbors(i);
    if (nb.empty()) {
      report.add(Severity::Fail, "follower_has_neighbor", i, "follower senses no agent");
      continue;
    }
    for (int j : nb) {
      if (j < 1 || j >= i) {
        report.add(Severity::Fail, "lower_numbered_neighbors", i,
                   fmt::format("neighbor {} is not in {{1..{}}}", j, i - 1));
      }
    }
    std::set<int> unique(nb.begin(), nb.end());
    if (unique.size() != nb.size()) {
      report.add(Severity::Fail, "no_duplicate_neighbors", i, fmt::format("duplicates in {}", nb));
    }
  }
  const auto reach = leader_reachability(graph);
  for (int i = 2; i <= n; ++i) {
    if (!reach[static_cast<std::size_t>(i - 1)]) {
      report.add(Severity::Fail, "leader_reachable", i, "no directed path to the leader");
    }
  }
  if (report.ok()) {
    report.add(Severity::Pass, "topology", 0,
               fmt::format("leader-follower acyclic digraph with {} agents", n));
  }
  return report;
}

double max_kp(int cardinality, double kd) {
  if (cardinality < 1) {
    throw Error(ErrorCode::InvalidGain, fmt::format("cardinality {} < 1", cardinality));
  }
  if (!(kd > 1.0)) {
    throw Error(ErrorCode::InvalidGain, fmt::format("kd = {} must exceed 1", kd));
  }
  const double n = cardinality;
  return 4.0 / n - 4.0 / (kd * kd * n * n * n);
}

ValidationReport validate_gains(const SensingGraph& graph, std::span<const FeedbackGains> gains) {
  ValidationReport report;
  if (static_cast<int>(gains.size()) != graph.size()) {
    report.add(Severity::Fail, "gain_count", 0,
               fmt::format("{} gain entries for {} agents", gains.size(), graph.size()));
    return report;
  }
  for (int i = 2; i <= graph.size(); ++i) {
    const auto& g = gains[static_cast<std::size_t>(i - 1)];
    if (!(g.kd > 1.0)) {
      report.add(Severity::Fail, "kd_above_one", i, fmt::format("kd = {} must exceed 1", g.kd));
      continue;
    }
    if (!(g.kp > 0.0)) {
      report.add(Severity::Fail, "kp_positive", i, fmt::format("kp = {} must be positive", g.kp));
      continue;
    }
    const int card = graph.cardinality(i);
    if (card < 1) continue;  // reported by validate_topology
    const double bound = max_kp(card, g.kd);
    if (g.kp < bound) {
      report.add(Severity::Pass, "kp_bound", i,
                 fmt::format("kp = {} < {:.4f} (N = {}, kd = {})", g.kp, bound, card, g.kd));
    } else {
      report.add(Severity::Warn, "kp_bound", i,
                 fmt::format("kp = {} exceeds the sufficient bound {:.4f} (N = {}, kd = {})", g.kp,
                             bound, card, g.kd));
    }
  }
  return report;
}

Renumbering renumber_leader_first(const std::vector<std::vector<int>>& lists) {
  const int n = static_cast<int>(lists.size());
  std::vector<int> pending(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> sensed_by(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const auto& nb = lists[static_cast<std::size_t>(i - 1)];
    for (int j : nb) {
      if (j < 1 || j > n || j == i) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("agent {} has invalid neighbor {}", i, j));
      }
      sensed_by[static_cast<std::size_t>(j - 1)].push_back(i);
    }
    pending[static_cast<std::size_t>(i - 1)] = static_cast<int>(std::set<int>(nb.begin(), nb.end()).size());
  }
  std::vector<int> roots;
  for (int i = 1; i <= n; ++i) {
    if (pending[static_cast<std::size_t>(i - 1)] == 0) roots.push_back(i);
  }
  if (roots.size() != 1) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("expected exactly one root, found {}", roots.size()));
  }
  // Kahn's algorithm; a min-heap keeps the relabelling stable for ties.
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  ready.push(roots.front());
  std::vector<int> new_id(static_cast<std::size_t>(n), 0);
  int next = 1;
  while (!ready.empty()) {
    const int j = ready.top();
    ready.pop();
    new_id[static_cast<std::size_t>(j - 1)] = next++;
    std::set<int> seen;
    for (int i : sensed_by[static_cast<std::size_t>(j - 1)]) {
      if (!seen.insert(i).second) continue;
      if (--pending[static_cast<std::size_t>(i - 1)] == 0) ready.push(i);
    }
  }
  if (next != n + 1) throw Error(ErrorCode::InvalidArgument, "graph contains a directed cycle");

  std::vector<std::vector<int>> relabelled(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    auto& dst = relabelled[static_cast<std::size_t>(new_id[static_cast<std::size_t>(i - 1)] - 1)];
    for (int j : lists[static_cast<std::size_t>(i - 1)]) dst.push_back(new_id[static_cast<std::size_t>(j - 1)]);
  }
  return {SensingGraph(std::move(relabelled)), std::move(new_id)};
}

}  // namespace bearform
