#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "drinv/dqn.hpp"
#include "drinv/error.hpp"
#include "drinv/stats.hpp"

namespace drinv {
namespace {

double relative_error(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-6});
}

TEST(QNetwork, ZeroWeightsGiveZeroOutputs) {
  QNetwork net({5, 8, 3});
  const std::vector<double> x{1, -2, 3, 0.5, 9};
  EXPECT_EQ(net.forward(std::span<const double>(x)), Eigen::VectorXd::Zero(3));
}

TEST(QNetwork, HandComputedForwardPass) {
  QNetwork net({1, 2, 2});
  auto& l = net.layers();
  l[0].weight << 1.0, -2.0;
  l[0].bias << 0.5, 1.0;
  l[1].weight << 1.0, 3.0, -1.0, 0.5;
  l[1].bias << 0.1, -0.2;
  const std::vector<double> x{2.0};
  const auto q = net.forward(std::span<const double>(x));
  // hidden = relu(2.5, -3) = (2.5, 0)
  EXPECT_DOUBLE_EQ(q[0], 2.6);
  EXPECT_DOUBLE_EQ(q[1], -2.7);
}

TEST(QNetwork, ZeroPaddedInputsAreNeutral) {
  Rng rng(4);
  auto net = QNetwork::initialized({4, 6, 2}, rng);
  auto wider = QNetwork::initialized({7, 6, 2}, rng);
  wider.layers()[1] = net.layers()[1];
  wider.layers()[0].weight.leftCols(4) = net.layers()[0].weight;
  wider.layers()[0].bias = net.layers()[0].bias;
  const std::vector<double> x{0.3, -1.0, 2.0, 0.1};
  const std::vector<double> padded{0.3, -1.0, 2.0, 0.1, 0.0, 0.0, 0.0};
  const Eigen::VectorXd diff =
      net.forward(std::span<const double>(x)) - wider.forward(std::span<const double>(padded));
  EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(QNetwork, InputSizeMismatchThrows) {
  QNetwork net({3, 2});
  const std::vector<double> x{1.0, 2.0};
  EXPECT_THROW(net.forward(std::span<const double>(x)), ContractViolation);
}

TEST(QNetwork, HeUniformInitIsSeededAndBounded) {
  Rng a(9), b(9);
  const auto n1 = QNetwork::initialized({10, 64, 14}, a);
  const auto n2 = QNetwork::initialized({10, 64, 14}, b);
  EXPECT_TRUE(n1 == n2);
  const double bound = std::sqrt(6.0 / 10.0);
  EXPECT_LE(n1.layers()[0].weight.cwiseAbs().maxCoeff(), bound);
  EXPECT_EQ(n1.layers()[0].bias, Eigen::VectorXd::Zero(64));
  EXPECT_EQ(n1.parameter_count(), 10u * 64u + 64u + 64u * 14u + 14u);
}

// Central differences over every parameter of small random networks.
TEST(Gradient, MatchesFiniteDifferences) {
  Rng rng(123);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> width(2, 6);
  for (int trial = 0; trial < 10; ++trial) {
    const int in = width(rng), out = width(rng), batch = 4;
    auto net = QNetwork::initialized({in, width(rng), width(rng), out}, rng);
    for (auto& layer : net.layers()) layer.bias = Eigen::VectorXd::NullaryExpr(layer.bias.size(), [&] { return 0.1 * u(rng); });
    Eigen::MatrixXd states = Eigen::MatrixXd::NullaryExpr(in, batch, [&] { return u(rng); });
    std::vector<int> actions;
    std::vector<double> targets;
    for (int b = 0; b < batch; ++b) {
      actions.push_back(std::uniform_int_distribution<int>(0, out - 1)(rng));
      targets.push_back(u(rng));
    }
    const auto g = gradient(net, states, actions, targets);
    const double h = 1e-5;
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
      auto& w = net.layers()[l].weight;
      for (Eigen::Index k = 0; k < w.size(); ++k) {
        const double keep = w.data()[k];
        w.data()[k] = keep + h;
        const double up = td_loss(net, states, actions, targets);
        w.data()[k] = keep - h;
        const double down = td_loss(net, states, actions, targets);
        w.data()[k] = keep;
        EXPECT_LE(relative_error(g.layers[l].weight.data()[k], (up - down) / (2 * h)), 1e-4);
      }
      auto& bias = net.layers()[l].bias;
      for (Eigen::Index k = 0; k < bias.size(); ++k) {
        const double keep = bias[k];
        bias[k] = keep + h;
        const double up = td_loss(net, states, actions, targets);
        bias[k] = keep - h;
        const double down = td_loss(net, states, actions, targets);
        bias[k] = keep;
        EXPECT_LE(relative_error(g.layers[l].bias[k], (up - down) / (2 * h)), 1e-4);
      }
    }
  }
}

TEST(Gradient, HandComputedOneByOne) {
  QNetwork net({1, 1, 1});
  net.layers()[0].weight << 1.0;
  net.layers()[0].bias << 0.0;
  net.layers()[1].weight << 1.0;
  net.layers()[1].bias << 0.0;
  Eigen::MatrixXd s(1, 1);
  s << 2.0;
  const std::vector<int> a{0};
  const std::vector<double> y{1.0};
  // Q = 2, error 1, dL/dQ = 2.
  const auto g = gradient(net, s, a, y);
  EXPECT_DOUBLE_EQ(g.loss, 1.0);
  EXPECT_DOUBLE_EQ(g.layers[1].weight(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(g.layers[1].bias[0], 2.0);
  EXPECT_DOUBLE_EQ(g.layers[0].weight(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(g.layers[0].bias[0], 2.0);
}

TEST(Gradient, ZeroErrorGivesZeroGradient) {
  Rng rng(2);
  const auto net = QNetwork::initialized({3, 5, 4}, rng);
  Eigen::MatrixXd s = Eigen::MatrixXd::Random(3, 6);
  std::vector<int> a{0, 1, 2, 3, 0, 1};
  const Eigen::MatrixXd q = net.forward(s);
  std::vector<double> y;
  for (int b = 0; b < 6; ++b) y.push_back(q(a[static_cast<std::size_t>(b)], b));
  const auto g = gradient(net, s, a, y);
  for (const auto& layer : g.layers) {
    EXPECT_EQ(layer.weight.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(layer.bias.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Optimizer, SgdStepMovesAgainstGradient) {
  QNetwork net({1, 1});
  net.layers()[0].weight << 1.0;
  net.layers()[0].bias << 0.0;
  Gradients g;
  g.layers = net.layers();
  g.layers[0].weight << 2.0;
  g.layers[0].bias << -1.0;
  OptimizerConfig cfg;
  cfg.learning_rate = 0.5;
  Optimizer(cfg).apply(net, g);
  EXPECT_DOUBLE_EQ(net.layers()[0].weight(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(net.layers()[0].bias[0], 0.5);
}

TEST(Optimizer, ClippingBoundsTheStep) {
  QNetwork net({1, 1});
  Gradients g;
  g.layers = net.layers();
  g.layers[0].weight << 30.0;
  g.layers[0].bias << 40.0;
  OptimizerConfig cfg;
  cfg.learning_rate = 1.0;
  cfg.max_grad_norm = 5.0;
  Optimizer(cfg).apply(net, g);
  EXPECT_NEAR(net.layers()[0].weight(0, 0), -3.0, 1e-12);
  EXPECT_NEAR(net.layers()[0].bias[0], -4.0, 1e-12);
}

TransitionBatch one_transition(double reward, bool terminal) {
  TransitionBatch b;
  b.states = Eigen::MatrixXd::Zero(1, 1);
  b.next_states = Eigen::MatrixXd::Ones(1, 1);
  b.actions = {0};
  b.rewards = {reward};
  b.terminal = {terminal};
  return b;
}

QNetwork target_with_outputs(double q0, double q1) {
  QNetwork net({1, 2});
  net.layers()[0].bias << q0, q1;
  return net;
}

TEST(TdTargets, BootstrapsFromTargetMax) {
  const auto target = target_with_outputs(2.0, -1.0);
  EXPECT_DOUBLE_EQ(td_targets(one_transition(1.0, false), target, 0.9)[0], 2.8);
  EXPECT_DOUBLE_EQ(td_targets(one_transition(1.0, true), target, 0.9)[0], 1.0);
  EXPECT_DOUBLE_EQ(td_targets(one_transition(1.5, false), target, 0.0)[0], 1.5);
}

TEST(Policy, GreedyPicksArgmaxLowestOnTies) {
  const std::vector<double> q{1.0, 3.0, 3.0, 2.0};
  Rng rng(0);
  EXPECT_EQ(act_epsilon_greedy(q, 0.0, rng), 1);
  EXPECT_EQ(greedy_action(q), 1);
  const std::vector<double> flat(5, 0.0);
  EXPECT_EQ(greedy_action(flat), 0);
}

TEST(Policy, FullExplorationIsUniform) {
  const std::vector<double> q(kNumActions, 0.0);
  Rng rng(31);
  std::vector<long> counts(kNumActions, 0);
  for (int i = 0; i < 14000; ++i) ++counts[static_cast<std::size_t>(act_epsilon_greedy(q, 1.0, rng))];
  EXPECT_GT(stats::chi_square_uniform(counts).p_value, 0.01);
}

TEST(Policy, EpsilonScheduleIsLinearThenFlat) {
  const EpsilonSchedule s{1.0, 0.1, 100};
  EXPECT_DOUBLE_EQ(s.at(0), 1.0);
  EXPECT_NEAR(s.at(50), 0.55, 1e-12);
  EXPECT_DOUBLE_EQ(s.at(100), 0.1);
  EXPECT_DOUBLE_EQ(s.at(10000), 0.1);
}

TEST(Target, SyncCopiesAndThenDecouples) {
  Rng rng(5);
  auto net = QNetwork::initialized({3, 4, 2}, rng);
  QNetwork target({3, 4, 2});
  sync_target(net, target);
  EXPECT_TRUE(net == target);
  net.layers()[0].weight(0, 0) += 1.0;
  EXPECT_FALSE(net == target);
}

TEST(Replay, OverwritesOldestWhenFull) {
  ReplayBuffer buf(3, 1);
  for (int i = 0; i < 5; ++i) {
    const std::vector<double> s{double(i)};
    buf.push(s, i, i, s, false);
  }
  EXPECT_EQ(buf.size(), 3u);
  std::vector<int> actions;
  for (std::size_t i = 0; i < 3; ++i) actions.push_back(buf.at(i).action);
  std::sort(actions.begin(), actions.end());
  EXPECT_EQ(actions, (std::vector<int>{2, 3, 4}));
}

TEST(Replay, SamplingIsUniform) {
  ReplayBuffer buf(20, 2);
  const std::vector<double> s{0.0, 1.0};
  for (int i = 0; i < 20; ++i) buf.push(s, i, 0.0, s, false);
  Rng rng(77);
  std::vector<long> counts(20, 0);
  for (int i = 0; i < 10000; ++i)
    for (auto idx : buf.sample_indices(10, rng)) ++counts[idx];
  EXPECT_GT(stats::chi_square_uniform(counts).p_value, 0.01);
  EXPECT_THROW(ReplayBuffer(2, 1).sample_indices(1, rng), ContractViolation);
}

TEST(Replay, GatherPreservesFields) {
  ReplayBuffer buf(4, 2);
  buf.push(std::vector<double>{1, 2}, 3, 0.5, std::vector<double>{4, 5}, true);
  const std::vector<std::size_t> idx{0, 0};
  const auto b = buf.gather(idx);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b.states(1, 1), 2.0);
  EXPECT_EQ(b.next_states(0, 0), 4.0);
  EXPECT_EQ(b.actions[1], 3);
  EXPECT_EQ(b.rewards[0], 0.5);
  EXPECT_TRUE(b.terminal[0]);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  Rng rng(8);
  auto net = QNetwork::initialized({7, 64, 64, 14}, rng);
  net.layers()[0].bias[3] = 1.0 / 3.0;
  std::stringstream io;
  net.save(io);
  const auto back = QNetwork::load(io);
  EXPECT_TRUE(net == back);
  std::stringstream bad("drinv-qnetwork 2\n");
  EXPECT_THROW(QNetwork::load(bad), ParseError);
}

TrainConfig tiny_training(std::uint64_t seed) {
  TrainConfig cfg;
  cfg.episodes = 3;
  cfg.horizon = 20;
  cfg.warmup = 32;
  cfg.replay_capacity = 500;
  cfg.target_sync_interval = 50;
  cfg.epsilon.decay_steps = 200;
  cfg.hidden = {16};
  cfg.seed = seed;
  return cfg;
}

TEST(Train, SameSeedSameResult) {
  Rng cat_rng(1);
  const DemandSource demand(make_synthetic_catalog(4, cat_rng));
  EnvConfig env;
  env.constraints = default_constraints(demand.catalog());
  const DelayConfig delay{DelayMode::action, DelayKind::constant, 2, 2};
  const auto a = train(demand, env, delay, tiny_training(3), Algorithm::drdqn);
  const auto b = train(demand, env, delay, tiny_training(3), Algorithm::drdqn);
  EXPECT_TRUE(a.net == b.net);
  ASSERT_EQ(a.episodes.size(), 3u);
  for (std::size_t e = 0; e < 3; ++e) EXPECT_EQ(a.episodes[e].business_reward, b.episodes[e].business_reward);
  EXPECT_TRUE(a.net.all_finite());
}

TEST(Train, ZeroDelayMakesBothLearnersIdentical) {
  Rng cat_rng(2);
  const DemandSource demand(make_synthetic_catalog(3, cat_rng));
  EnvConfig env;
  env.constraints = default_constraints(demand.catalog());
  const DelayConfig delay{DelayMode::action, DelayKind::constant, 0, 0};
  const auto a = train(demand, env, delay, tiny_training(4), Algorithm::dqn);
  const auto b = train(demand, env, delay, tiny_training(4), Algorithm::drdqn);
  EXPECT_TRUE(a.net == b.net);
  for (std::size_t e = 0; e < a.episodes.size(); ++e)
    EXPECT_EQ(a.episodes[e].business_reward, b.episodes[e].business_reward);
}

TEST(Train, InvalidConfigIsRejected) {
  auto cfg = tiny_training(0);
  cfg.gamma = 1.5;
  EXPECT_THROW(cfg.validate(), ContractViolation);
  cfg = tiny_training(0);
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(), ContractViolation);
}

}  // namespace
}  // namespace drinv
