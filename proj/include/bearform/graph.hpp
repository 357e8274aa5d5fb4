#pragma once

#include <span>
#include <string>
#include <vector>

namespace bearform {

/// Directed sensing edge (i, j): agent i measures agent j. Ids are 1-based.
struct Edge {
  int from;
  int to;
  bool operator==(const Edge&) const = default;
};

/// Leader-follower sensing topology. Agent 1 is the leader; neighbors(i) is
/// the set of agents i can sense. Construction stores the lists verbatim so
/// that malformed graphs can still be reported on by validate_topology().
class SensingGraph {
 public:
  SensingGraph() = default;
  /// lists[k] holds the neighbors of agent k + 1.
  explicit SensingGraph(std::vector<std::vector<int>> lists);

  /// Path 1 <- 2 <- ... <- n, i.e. N_i = {i - 1}.
  static SensingGraph chain(int n);

  int size() const { return static_cast<int>(lists_.size()); }
  std::span<const int> neighbors(int agent) const;
  int cardinality(int agent) const { return static_cast<int>(neighbors(agent).size()); }
  const std::vector<std::vector<int>>& lists() const { return lists_; }

  /// All edges ordered by (from, position in the neighbor list).
  std::vector<Edge> edges() const;

  bool operator==(const SensingGraph&) const = default;

 private:
  std::vector<std::vector<int>> lists_;
};

enum class Severity { Pass, Warn, Fail };

struct Finding {
  Severity severity;
  std::string check;
  int agent;  // 0 when the finding is graph-wide
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const;            // no Fail findings
  bool has_warnings() const;  // any Warn finding
  int count(Severity s) const;
  void add(Severity s, std::string check, int agent, std::string message);
  void merge(const ValidationReport& other);
};

/// Checks the leader-follower invariants: n >= 2, N_1 empty, every follower
/// has a nonempty neighbor set drawn from lower-numbered agents with no
/// duplicates. Leader reachability is re-checked by graph traversal.
ValidationReport validate_topology(const SensingGraph& graph);

/// reachable[k] is true when agent k + 1 has a directed path to agent 1.
/// Out-of-range neighbor ids are ignored.
std::vector<bool> leader_reachability(const SensingGraph& graph);

/// Sufficient upper bound on k_p: 4/N - 4/(k_d^2 N^3). Throws InvalidGain
/// for kd <= 1 or cardinality < 1.
double max_kp(int cardinality, double kd);

struct FeedbackGains {
  double kp;
  double kd;
};

/// Per-follower gain check. kd <= 1 or kp <= 0 fail; kp at or above max_kp
/// is only a warning because the bound is sufficient, not necessary.
/// gains[k] belongs to agent k + 1; the leader entry is ignored.
ValidationReport validate_gains(const SensingGraph& graph, std::span<const FeedbackGains> gains);

/// Result of relabelling an arbitrary acyclic single-root graph leader-first.
struct Renumbering {
  SensingGraph graph;
  std::vector<int> new_id;  // new_id[old_id - 1] is the canonical id
};

/// Topologically sorts a graph whose agents are labelled arbitrarily so that
/// the root becomes agent 1 and every agent follows its neighbors. Throws
/// InvalidArgument for cycles, several roots, or out-of-range ids.
Renumbering renumber_leader_first(const std::vector<std::vector<int>>& lists);

}  // namespace bearform
