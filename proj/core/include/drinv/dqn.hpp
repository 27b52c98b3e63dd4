#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "drinv/delay.hpp"
#include "drinv/qnetwork.hpp"
#include "drinv/replay.hpp"

namespace drinv {

// DQN learns from the seven base features; DRDQN from information states
// (base features plus the zero-padded buffer of pending decisions).
enum class Algorithm { dqn, drdqn };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& text);

// Linear decay from `start` to `end` over `decay_steps` agent decisions.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  long decay_steps = 50000;

  double at(long step) const;
  bool operator==(const EpsilonSchedule&) const = default;
};

// Step counters (replay warm-up, epsilon decay, target sync) count agent
// decisions, i.e. one per product per environment step.
struct TrainConfig {
  double gamma = 0.99;
  OptimizerConfig optimizer;
  int batch_size = 32;
  int replay_capacity = 50000;
  int target_sync_interval = 1000;
  EpsilonSchedule epsilon;
  int horizon = 100;
  int episodes = 300;
  std::uint64_t seed = 0;
  std::vector<int> hidden = {64, 64};
  // Gradient updates per environment step, once the buffer holds `warmup` transitions.
  int updates_per_step = 1;
  int warmup = 1000;
  // Treat the horizon as a true terminal (no bootstrap). Off: time-limit truncation.
  bool terminal_at_horizon = false;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

// y = r + gamma * max_a' Q_target(s', a'), or y = r for terminal transitions.
std::vector<double> td_targets(const TransitionBatch& batch, const QNetwork& target, double gamma);

// Uniform random action with probability epsilon, else the argmax with the
// lowest index winning ties.
int act_epsilon_greedy(std::span<const double> qvalues, double epsilon, Rng& rng);
int greedy_action(std::span<const double> qvalues);

void sync_target(const QNetwork& net, QNetwork& target);

struct EpisodeStats {
  int episode = 0;
  int delay = 0;
  // Sum over the episode of the per-step business reward.
  double business_reward = 0.0;
  long long sales = 0;
  long long wastage = 0;
  long long unmet = 0;
  long long holding = 0;
  double epsilon = 0.0;  // at the end of the episode
  double wall_ms = 0.0;
};

struct TrainResult {
  QNetwork net;
  std::vector<EpisodeStats> episodes;
};

using EpisodeCallback = std::function<void(const EpisodeStats&)>;

// One network shared across products: every step runs a batched forward pass
// over all products, one joint capacity projection, and stores one transition
// per product in a shared replay buffer.
TrainResult train(const DemandSource& demand, const EnvConfig& env, const DelayConfig& delay,
                  const TrainConfig& cfg, Algorithm algorithm,
                  const EpisodeCallback& on_episode = {});

}  // namespace drinv
