#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "drinv/catalog.hpp"

namespace drinv {

struct Transition {
  std::vector<double> state;
  int action = 0;  // the agent's decision, before any capacity projection
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

struct TransitionBatch {
  Eigen::MatrixXd states;       // state_size x B
  Eigen::MatrixXd next_states;  // state_size x B
  std::vector<int> actions;
  std::vector<double> rewards;
  std::vector<bool> terminal;

  std::size_t size() const { return actions.size(); }
};

// Fixed-capacity ring; the oldest transition is overwritten once full.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t state_size);

  void push(std::span<const double> state, int action, double reward,
            std::span<const double> next_state, bool terminal);
  void push(const Transition& t) { push(t.state, t.action, t.reward, t.next_state, t.terminal); }

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t state_size() const { return state_size_; }

  Transition at(std::size_t index) const;

  // Uniform with replacement. Requires size() >= batch_size.
  std::vector<std::size_t> sample_indices(std::size_t batch_size, Rng& rng) const;
  TransitionBatch gather(std::span<const std::size_t> indices) const;
  TransitionBatch sample(std::size_t batch_size, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t state_size_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;
  // Grown on demand up to capacity_ columns.
  Eigen::MatrixXd states_;
  Eigen::MatrixXd next_states_;
  std::vector<int> actions_;
  std::vector<double> rewards_;
  std::vector<char> terminal_;
};

}  // namespace drinv
