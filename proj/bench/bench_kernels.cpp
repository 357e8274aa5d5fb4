#include <benchmark/benchmark.h>

#include <numbers>

#include "bearform/scenario.hpp"
#include "bearform/sim.hpp"
#include "bearform/trajectory.hpp"

using namespace bearform;

namespace {

// Ring of n agents on a breathing circle, chain graph.
SimConfig ring(int n, double duration) {
  CircleParams cp;
  cp.a0 = 0.25 * n;
  cp.phases.clear();
  for (int k = 0; k < n; ++k) cp.phases.push_back(2.0 * std::numbers::pi * k / n);
  SimConfig cfg;
  cfg.duration = duration;
  cfg.graph = SensingGraph::chain(n);
  cfg.trajectory = std::make_shared<CircleTrajectory>(cp);
  cfg.noise = {0.003, 0.01, 1};
  cfg.seed = 7;
  for (int a = 1; a <= n; ++a) {
    AgentConfig ac;
    const auto d = cfg.trajectory->evaluate(a, 0.0);
    ac.initial.p = d.p + (a > 1 ? Vector3(0.1, -0.1, 0.05) : Vector3::Zero());
    ac.initial.v = d.v;
    ac.gains = a == 1 ? ControlGains{4.0, 4.0, 0.0, 20.0, 0.0} : ControlGains{};
    cfg.agents.push_back(ac);
  }
  return cfg;
}

void BM_BpeParallel(benchmark::State& state) {
  const auto cfg = ring(static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(is_bpe(*cfg.trajectory, cfg.graph, 60.0, PEParams{}));
}

void BM_BpeSerial(benchmark::State& state) {
  const auto cfg = ring(static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(is_bpe_serial(*cfg.trajectory, cfg.graph, 60.0, PEParams{}));
}

std::vector<SimConfig> sweep() {
  std::vector<SimConfig> configs;
  auto base = to_sim_config(*find_bundled("scenario2"));
  base.duration = 10.0;
  for (int k = 0; k < 8; ++k) {
    auto cfg = base;
    for (auto& a : cfg.agents) a.gains.n_gain = 5.0 + 5.0 * k;
    configs.push_back(cfg);
  }
  return configs;
}

void BM_BatchParallel(benchmark::State& state) {
  const auto configs = sweep();
  for (auto _ : state) benchmark::DoNotOptimize(run_batch(configs));
}

void BM_BatchSerial(benchmark::State& state) {
  const auto configs = sweep();
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_serial(configs));
}

void BM_AgentsParallel(benchmark::State& state) {
  const auto cfg = ring(static_cast<int>(state.range(0)), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
}

void BM_AgentsSerial(benchmark::State& state) {
  auto cfg = ring(static_cast<int>(state.range(0)), 2.0);
  cfg.parallel_agent_threshold = 1 << 30;
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
}

}  // namespace

BENCHMARK(BM_BpeParallel)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BpeSerial)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AgentsParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AgentsSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
