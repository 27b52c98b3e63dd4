#include "drinv/dqn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "drinv/error.hpp"

namespace drinv {

std::string to_string(Algorithm a) { return a == Algorithm::dqn ? "dqn" : "drdqn"; }

Algorithm parse_algorithm(const std::string& text) {
  if (text == "dqn" || text == "DQN") return Algorithm::dqn;
  if (text == "drdqn" || text == "DRDQN") return Algorithm::drdqn;
  throw ConfigError("unknown algorithm '" + text + "'");
}

double EpsilonSchedule::at(long step) const {
  if (decay_steps <= 0 || step >= decay_steps) return end;
  const double frac = static_cast<double>(std::max(0L, step)) / static_cast<double>(decay_steps);
  return start + frac * (end - start);
}

void TrainConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ContractViolation("train: gamma must be in [0,1)");
  if (!(optimizer.learning_rate > 0.0)) throw ContractViolation("train: learning rate must be > 0");
  if (batch_size < 1) throw ContractViolation("train: batch size must be >= 1");
  if (replay_capacity < batch_size) throw ContractViolation("train: replay capacity below batch size");
  if (target_sync_interval < 1) throw ContractViolation("train: target sync interval must be >= 1");
  if (!(epsilon.start >= 0.0 && epsilon.start <= 1.0 && epsilon.end >= 0.0 &&
        epsilon.end <= epsilon.start))
    throw ContractViolation("train: epsilon requires 0 <= end <= start <= 1");
  if (epsilon.decay_steps < 0) throw ContractViolation("train: epsilon decay steps must be >= 0");
  if (horizon < 1 || episodes < 1) throw ContractViolation("train: horizon and episodes must be >= 1");
  if (updates_per_step < 0 || warmup < 0) throw ContractViolation("train: negative update settings");
  for (int h : hidden) if (h < 1) throw ContractViolation("train: hidden sizes must be >= 1");
}

std::vector<double> td_targets(const TransitionBatch& batch, const QNetwork& target, double gamma) {
  require(batch.size() > 0, "td_targets: empty batch");
  std::vector<double> y(batch.size());
  const Eigen::MatrixXd next_q = target.forward(batch.next_states);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    y[b] = batch.rewards[b];
    if (!batch.terminal[b]) y[b] += gamma * next_q.col(static_cast<Eigen::Index>(b)).maxCoeff();
  }
  return y;
}

int greedy_action(std::span<const double> qvalues) {
  require(!qvalues.empty(), "greedy_action: no actions");
  // max_element returns the first maximum.
  return static_cast<int>(std::max_element(qvalues.begin(), qvalues.end()) - qvalues.begin());
}

int act_epsilon_greedy(std::span<const double> qvalues, double epsilon, Rng& rng) {
  require(epsilon >= 0.0 && epsilon <= 1.0, "act_epsilon_greedy: epsilon must be in [0,1]");
  require(!qvalues.empty(), "act_epsilon_greedy: no actions");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    return std::uniform_int_distribution<int>(0, static_cast<int>(qvalues.size()) - 1)(rng);
  }
  return greedy_action(qvalues);
}

void sync_target(const QNetwork& net, QNetwork& target) { target = net; }

TrainResult train(const DemandSource& demand, const EnvConfig& env_cfg, const DelayConfig& delay,
                  const TrainConfig& cfg, Algorithm algorithm, const EpisodeCallback& on_episode) {
  cfg.validate();
  const bool augmented = algorithm == Algorithm::drdqn;
  DelayedInventoryEnv env(demand, env_cfg, delay);
  const auto products = static_cast<Eigen::Index>(env.num_products());
  const auto width = static_cast<Eigen::Index>(env.observation_size(augmented));

  Rng init_rng = make_stream(cfg.seed, Stream::init);
  Rng demand_rng = make_stream(cfg.seed, Stream::demand);
  Rng explore_rng = make_stream(cfg.seed, Stream::explore);
  Rng replay_rng = make_stream(cfg.seed, Stream::replay);
  Rng delay_rng = make_stream(cfg.seed, Stream::delay);

  std::vector<int> sizes{static_cast<int>(width)};
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(kNumActions);

  TrainResult result;
  result.net = QNetwork::initialized(sizes, init_rng);
  QNetwork target = result.net;
  Optimizer optimizer(cfg.optimizer);
  ReplayBuffer replay(static_cast<std::size_t>(cfg.replay_capacity), static_cast<std::size_t>(width));

  Eigen::MatrixXd obs(width, products), next_obs(width, products);
  std::vector<int> decisions(static_cast<std::size_t>(products));
  long decisions_made = 0;
  long next_sync = cfg.target_sync_interval;
  const auto min_fill =
      static_cast<std::size_t>(std::max(cfg.batch_size, cfg.warmup));

  for (int episode = 0; episode < cfg.episodes; ++episode) {
    const auto started = std::chrono::steady_clock::now();
    EpisodeStats stats;
    stats.episode = episode;
    stats.delay = sample_episode_delay(delay, delay_rng);
    env.reset(stats.delay);
    env.observe(augmented, std::span<double>(obs.data(), static_cast<std::size_t>(obs.size())));

    for (int t = 0; t < cfg.horizon; ++t) {
      const Eigen::MatrixXd q = result.net.forward(obs);
      const double eps = cfg.epsilon.at(decisions_made);
      for (Eigen::Index i = 0; i < products; ++i) {
        decisions[static_cast<std::size_t>(i)] = act_epsilon_greedy(
            std::span<const double>(q.col(i).data(), static_cast<std::size_t>(q.rows())), eps,
            explore_rng);
      }

      const StepResult step = env.step(decisions, demand_rng);
      env.observe(augmented,
                  std::span<double>(next_obs.data(), static_cast<std::size_t>(next_obs.size())));
      const bool terminal = cfg.terminal_at_horizon && t + 1 == cfg.horizon;

      for (Eigen::Index i = 0; i < products; ++i) {
        const auto u = static_cast<std::size_t>(i);
        replay.push(std::span<const double>(obs.col(i).data(), static_cast<std::size_t>(width)),
                    decisions[u], step.rewards[u],
                    std::span<const double>(next_obs.col(i).data(), static_cast<std::size_t>(width)),
                    terminal);
        const auto& o = step.outcome[u];
        stats.sales += o.sales;
        stats.wastage += o.wastage;
        stats.unmet += o.unmet;
        stats.holding += o.holding;
      }
      stats.business_reward += step.business_reward;
      decisions_made += products;

      if (replay.size() >= min_fill) {
        for (int u = 0; u < cfg.updates_per_step; ++u) {
          const auto batch = replay.sample(static_cast<std::size_t>(cfg.batch_size), replay_rng);
          const auto y = td_targets(batch, target, cfg.gamma);
          auto grads = gradient(result.net, batch.states, batch.actions, y);
          optimizer.apply(result.net, grads);
        }
      }
      while (decisions_made >= next_sync) {
        sync_target(result.net, target);
        next_sync += cfg.target_sync_interval;
      }
      obs.swap(next_obs);
    }

    stats.epsilon = cfg.epsilon.at(decisions_made);
    stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    result.episodes.push_back(stats);
    if (on_episode) on_episode(stats);
  }
  return result;
}

}  // namespace drinv
