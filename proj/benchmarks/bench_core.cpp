#include <benchmark/benchmark.h>

#include "drinv/dqn.hpp"

namespace {

using namespace drinv;

void BM_Forward(benchmark::State& state) {
  const int products = static_cast<int>(state.range(0));
  Rng rng(1);
  const auto net = QNetwork::initialized({static_cast<int>(information_state_size(10)), 64, 64, kNumActions}, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(net.input_size(), products);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
  state.SetItemsProcessed(state.iterations() * products);
}
BENCHMARK(BM_Forward)->Arg(20)->Arg(220);

void BM_Gradient(benchmark::State& state) {
  Rng rng(2);
  const auto net = QNetwork::initialized({static_cast<int>(information_state_size(10)), 64, 64, kNumActions}, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(net.input_size(), 32);
  std::vector<int> actions(32);
  std::vector<double> targets(32, 1.0);
  for (std::size_t i = 0; i < actions.size(); ++i) actions[i] = static_cast<int>(i % kNumActions);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(net, x, actions, targets));
}
BENCHMARK(BM_Gradient);

void BM_EnvStep(benchmark::State& state) {
  Rng rng(3);
  const auto catalog = make_synthetic_catalog(static_cast<int>(state.range(0)), rng);
  EnvConfig cfg;
  cfg.constraints = default_constraints(catalog);
  DelayedInventoryEnv env(DemandSource(catalog), cfg, {DelayMode::action, DelayKind::constant, 5, 5});
  const std::vector<int> decisions(catalog.size(), 6);
  std::vector<double> obs(catalog.size() * env.observation_size(true));
  for (auto _ : state) {
    if (env.time() >= 100) env.reset(5);
    env.step(decisions, rng);
    env.observe(true, obs);
    benchmark::DoNotOptimize(obs.data());
  }
}
BENCHMARK(BM_EnvStep)->Arg(20)->Arg(220);

void BM_Projection(benchmark::State& state) {
  Rng rng(4);
  const auto catalog = make_synthetic_catalog(static_cast<int>(state.range(0)), rng);
  const auto c = default_constraints(catalog);
  std::vector<int> q(catalog.size());
  std::uniform_int_distribution<int> qty(0, 100);
  for (auto& x : q) x = qty(rng);
  for (auto _ : state) benchmark::DoNotOptimize(project_actions(q, catalog, c));
}
BENCHMARK(BM_Projection)->Arg(20)->Arg(220);

}  // namespace
BENCHMARK_MAIN();
