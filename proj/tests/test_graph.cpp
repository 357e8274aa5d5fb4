#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "bearform/error.hpp"
#include "bearform/graph.hpp"
#include "support.hpp"

using namespace bearform;
using bearform::testing::Gen;

namespace {

bool has_fail(const ValidationReport& r, const std::string& check) {
  return std::any_of(r.findings.begin(), r.findings.end(),
                     [&](const Finding& f) { return f.severity == Severity::Fail && f.check == check; });
}

// Independent structural predicate for the three neighbor-set rules.
bool structurally_valid(const std::vector<std::vector<int>>& lists) {
  if (lists.size() < 2 || !lists[0].empty()) return false;
  for (std::size_t k = 1; k < lists.size(); ++k) {
    const auto& l = lists[k];
    if (l.empty()) return false;
    std::set<int> seen;
    for (int j : l) {
      if (j < 1 || j > static_cast<int>(k)) return false;
      if (!seen.insert(j).second) return false;
    }
  }
  return true;
}

// Forward BFS from the leader over "j is sensed by i" arcs.
bool all_reach_leader(const std::vector<std::vector<int>>& lists) {
  const int n = static_cast<int>(lists.size());
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) {
    for (int j : lists[static_cast<std::size_t>(i - 1)]) {
      if (j >= 1 && j <= n) out[static_cast<std::size_t>(j)].push_back(i);
    }
  }
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  std::queue<int> q;
  q.push(1);
  seen[1] = true;
  while (!q.empty()) {
    const int a = q.front();
    q.pop();
    for (int b : out[static_cast<std::size_t>(a)]) {
      if (!seen[static_cast<std::size_t>(b)]) {
        seen[static_cast<std::size_t>(b)] = true;
        q.push(b);
      }
    }
  }
  return std::all_of(seen.begin() + 1, seen.end(), [](bool s) { return s; });
}

std::vector<std::vector<int>> random_lists(Gen& gen, int n) {
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(n));
  if (gen.coin(0.1)) lists[0].push_back(gen.integer(1, n));
  for (int i = 2; i <= n; ++i) {
    auto& l = lists[static_cast<std::size_t>(i - 1)];
    if (gen.coin(0.05)) continue;
    for (int j = 1; j < i; ++j) {
      if (gen.coin(0.4)) l.push_back(j);
    }
    if (l.empty()) l.push_back(gen.integer(1, i - 1));
    // Occasional forward reference or duplicate.
    if (gen.coin(0.04)) l.push_back(gen.integer(1, n));
    if (gen.coin(0.04)) l.push_back(l.front());
  }
  return lists;
}

}  // namespace

TEST(Topology, ScenarioOneGraphIsValid) {
  const auto r = validate_topology(SensingGraph({{}, {1}, {2}, {2, 3}}));
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.has_warnings());
}

TEST(Topology, ChainIsValid) {
  EXPECT_TRUE(validate_topology(SensingGraph::chain(4)).ok());
  EXPECT_EQ(SensingGraph::chain(4).lists(), (std::vector<std::vector<int>>{{}, {1}, {2}, {3}}));
}

TEST(Topology, FollowerWithoutNeighborFails) {
  const auto r = validate_topology(SensingGraph({{}, {}, {1}}));
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_fail(r, "follower_has_neighbor"));
}

TEST(Topology, RuleViolationsAreNamed) {
  EXPECT_TRUE(has_fail(validate_topology(SensingGraph({{2}, {1}})), "leader_senses_nothing"));
  EXPECT_TRUE(has_fail(validate_topology(SensingGraph({{}, {1}, {1, 1}})), "no_duplicate_neighbors"));
  EXPECT_TRUE(has_fail(validate_topology(SensingGraph({{}, {3}, {2}})), "lower_numbered_neighbors"));
  EXPECT_TRUE(has_fail(validate_topology(SensingGraph(std::vector<std::vector<int>>{{}})), "agent_count"));
}

TEST(Topology, RandomGraphsMatchStructuralAndTraversalChecks) {
  Gen gen(21);
  int valid = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = gen.integer(2, 8);
    const auto lists = random_lists(gen, n);
    const bool expected = structurally_valid(lists);
    const auto report = validate_topology(SensingGraph(lists));
    EXPECT_EQ(report.ok(), expected);
    if (expected) {
      ++valid;
      EXPECT_TRUE(all_reach_leader(lists));
      const auto reach = leader_reachability(SensingGraph(lists));
      EXPECT_TRUE(std::all_of(reach.begin(), reach.end(), [](bool b) { return b; }));
    }
  }
  EXPECT_GT(valid, 100);
}

TEST(MaxKp, Values) {
  EXPECT_NEAR(max_kp(1, 3.0), 4.0 - 4.0 / 9.0, 1e-12);
  EXPECT_NEAR(max_kp(1, 3.0), 3.5556, 1e-4);
  EXPECT_NEAR(max_kp(2, 3.0), 1.9444, 1e-4);
  EXPECT_NEAR(max_kp(1, 5.2), 3.8521, 1e-4);
  EXPECT_LT(1.9, max_kp(2, 3.0));
  EXPECT_GT(5.5, max_kp(1, 5.2));
}

TEST(MaxKp, RejectsBadArguments) {
  EXPECT_THROW(max_kp(0, 3.0), Error);
  EXPECT_THROW(max_kp(1, 1.0), Error);
}

TEST(MaxKp, MonotoneInCardinalityAndKd) {
  Gen gen(22);
  for (int k = 0; k < 1000; ++k) {
    // Below kd = sqrt(7/4) the bound grows from N = 1 to N = 2 (see next test).
    const double kd = gen.uniform(std::sqrt(1.75) + 1e-9, 20.0);
    const int card = gen.integer(1, 9);
    EXPECT_GT(max_kp(card, kd), max_kp(card + 1, kd));
    EXPECT_LT(max_kp(card, kd), max_kp(card, kd + gen.uniform(1e-3, 5.0)));
  }
}

TEST(MaxKp, NotMonotoneForSmallKd) {
  // max_kp(1) - max_kp(2) = 2 - 3.5 / kd^2, negative for kd^2 < 7/4.
  EXPECT_LT(max_kp(1, 1.2), max_kp(2, 1.2));
  EXPECT_GT(max_kp(2, 1.2), max_kp(3, 1.2));
  for (double kd = 1.01; kd < 20.0; kd += 0.01) EXPECT_LT(max_kp(1, kd), max_kp(1, kd + 0.01));
}

TEST(Gains, ScenarioOnePasses) {
  const SensingGraph g({{}, {1}, {2}, {2, 3}});
  const std::vector<FeedbackGains> gains(4, FeedbackGains{1.9, 3.0});
  const auto r = validate_gains(g, gains);
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.has_warnings());
}

TEST(Gains, ExperimentWarnsOnEveryFollower) {
  const SensingGraph g({{}, {1}, {1, 2}});
  const std::vector<FeedbackGains> gains(3, FeedbackGains{5.5, 5.2});
  const auto r = validate_gains(g, gains);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.count(Severity::Warn), 2);
}

TEST(Gains, SmallKdFails) {
  const SensingGraph g({{}, {1}, {2}});
  std::vector<FeedbackGains> gains(3, FeedbackGains{1.0, 3.0});
  gains[2].kd = 0.5;
  const auto r = validate_gains(g, gains);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_fail(r, "kd_above_one"));
}

TEST(Graph, NeighborsAndEdges) {
  const SensingGraph g({{}, {1}, {2}, {2, 3}});
  EXPECT_EQ(g.size(), 4);
  EXPECT_EQ(g.cardinality(4), 2);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{2, 1}, {3, 2}, {4, 2}, {4, 3}}));
  EXPECT_THROW(g.neighbors(5), Error);
  EXPECT_THROW(g.neighbors(0), Error);
}

TEST(Renumbering, LeaderFirstOrder) {
  // Leader is agent 3 here; 1 senses 3, 2 senses 1 and 3.
  const auto r = renumber_leader_first(std::vector<std::vector<int>>{{3}, {1, 3}, {}});
  EXPECT_TRUE(validate_topology(r.graph).ok());
  EXPECT_EQ(r.new_id[2], 1);
}

TEST(Renumbering, CycleRejected) {
  EXPECT_THROW(renumber_leader_first(std::vector<std::vector<int>>{{}, {3}, {2}}), Error);
}
