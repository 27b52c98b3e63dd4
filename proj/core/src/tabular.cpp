#include "drinv/tabular.hpp"

#include <algorithm>
#include <cmath>

#include "drinv/error.hpp"

namespace drinv {

DiscreteDelayedEnv::DiscreteDelayedEnv(const ExplicitMDP& mdp, int delay) : mdp_(&mdp), delay_(delay) {
  mdp.validate();
  require(delay >= 0, "DiscreteDelayedEnv: delay must be >= 0");
  pending_.assign(static_cast<std::size_t>(delay), 0);
}

void DiscreteDelayedEnv::reset(int base, std::span<const int> pending) {
  require(base >= 0 && base < mdp_->num_states, "DiscreteDelayedEnv::reset: base state out of range");
  require(pending.size() == static_cast<std::size_t>(delay_), "DiscreteDelayedEnv::reset: wrong pending length");
  for (int a : pending) require(a >= 0 && a < mdp_->num_actions, "DiscreteDelayedEnv::reset: bad action");
  base_ = base;
  pending_.assign(pending.begin(), pending.end());
}

void DiscreteDelayedEnv::reset_random(Rng& rng) {
  base_ = std::uniform_int_distribution<int>(0, mdp_->num_states - 1)(rng);
  std::uniform_int_distribution<int> pick(0, mdp_->num_actions - 1);
  for (auto& a : pending_) a = pick(rng);
}

int DiscreteDelayedEnv::info_state() const {
  int index = base_;
  for (int a : pending_) index = index * mdp_->num_actions + a;
  return index;
}

int DiscreteDelayedEnv::num_info_states() const {
  int n = mdp_->num_states;
  for (int j = 0; j < delay_; ++j) n *= mdp_->num_actions;
  return n;
}

double DiscreteDelayedEnv::step(int action, Rng& rng) {
  require(action >= 0 && action < mdp_->num_actions, "DiscreteDelayedEnv::step: bad action");
  int executed = action;
  if (delay_ > 0) {
    executed = pending_.front();
    pending_.pop_front();
    pending_.push_back(action);
  }
  const double r = mdp_->reward[base_][executed];
  const auto& row = mdp_->transitions[base_][executed];
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  int next = row.back().next;
  for (const auto& o : row) {
    if (u < o.prob) {
      next = o.next;
      break;
    }
    u -= o.prob;
  }
  base_ = next;
  return r;
}

TabularResult tabular_q_learning(DiscreteDelayedEnv& env, const TabularConfig& cfg, Rng& rng) {
  require(cfg.gamma >= 0.0 && cfg.gamma < 1.0, "tabular_q_learning: gamma must be in [0,1)");
  require(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0, "tabular_q_learning: epsilon must be in [0,1]");
  require(cfg.alpha_exponent > 0.5 && cfg.alpha_exponent <= 1.0,
          "tabular_q_learning: alpha exponent must be in (0.5, 1]");
  const int S = env.num_info_states();
  const int A = env.num_actions();
  TabularResult result{QTable(S, A), std::vector<long>(static_cast<std::size_t>(S), 0)};
  std::vector<long> pair_visits(static_cast<std::size_t>(S) * A, 0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> any_action(0, A - 1);

  for (int e = 0; e < cfg.episodes; ++e) {
    env.reset_random(rng);
    for (int t = 0; t < cfg.steps_per_episode; ++t) {
      const int s = env.info_state();
      const int a = coin(rng) < cfg.epsilon ? any_action(rng) : result.table.greedy(s);
      const double r = env.step(a, rng);
      const int s2 = env.info_state();
      const auto next = result.table.row(s2);
      const double target = r + cfg.gamma * *std::max_element(next.begin(), next.end());
      auto& n = pair_visits[static_cast<std::size_t>(s) * A + a];
      const double alpha = std::pow(1.0 + static_cast<double>(n), -cfg.alpha_exponent);
      ++n;
      ++result.state_visits[static_cast<std::size_t>(s)];
      double& q = result.table.at(s, a);
      q += alpha * (target - q);
    }
  }
  return result;
}

}  // namespace drinv
