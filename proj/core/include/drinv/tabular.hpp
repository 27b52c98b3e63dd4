#pragma once

#include <deque>
#include <vector>

#include "drinv/mdp.hpp"
#include "drinv/random.hpp"

namespace drinv {

// Simulates an ExplicitMDP whose decisions take effect `delay` steps later.
// The observable information state is (base state, pending decisions), indexed
// the same way as enumerate_augmented().
class DiscreteDelayedEnv {
 public:
  DiscreteDelayedEnv(const ExplicitMDP& mdp, int delay);

  // Start from `base` with the given pending decisions (size == delay).
  void reset(int base, std::span<const int> pending);
  // Uniformly random base state and pending decisions.
  void reset_random(Rng& rng);

  int info_state() const;
  int num_info_states() const;
  int num_actions() const { return mdp_->num_actions; }
  int delay() const { return delay_; }

  // Executes the oldest pending decision (or `action` itself when delay is 0)
  // and queues `action`. Returns the reward of the executed decision.
  double step(int action, Rng& rng);

 private:
  const ExplicitMDP* mdp_;
  int delay_;
  int base_ = 0;
  std::deque<int> pending_;
};

struct TabularConfig {
  double gamma = 0.9;
  int episodes = 20000;
  int steps_per_episode = 40;
  // Behaviour policy: epsilon-greedy on the current table. 1 = uniform.
  double epsilon = 1.0;
  // Step size (1 + n(s,a))^-exponent.
  double alpha_exponent = 0.6;
};

struct TabularResult {
  QTable table;
  std::vector<long> state_visits;
};

// One-step Q-learning over information states with exploring starts.
TabularResult tabular_q_learning(DiscreteDelayedEnv& env, const TabularConfig& cfg, Rng& rng);

}  // namespace drinv
