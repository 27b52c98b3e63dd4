#include "drinv/replay.hpp"

#include <algorithm>
#include <cmath>

#include "drinv/error.hpp"

namespace drinv {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t state_size)
    : capacity_(capacity), state_size_(state_size) {
  require(capacity_ >= 1, "ReplayBuffer: capacity must be >= 1");
  require(state_size_ >= 1, "ReplayBuffer: state size must be >= 1");
}

void ReplayBuffer::push(std::span<const double> state, int action, double reward,
                        std::span<const double> next_state, bool terminal) {
  require(state.size() == state_size_ && next_state.size() == state_size_,
          "ReplayBuffer::push: state size mismatch");
  require(std::isfinite(reward), "ReplayBuffer::push: reward must be finite");
  const auto cols = static_cast<Eigen::Index>(states_.cols());
  if (head_ >= static_cast<std::size_t>(cols)) {
    const auto grown = static_cast<Eigen::Index>(
        std::min(capacity_, std::max<std::size_t>(1024, 2 * static_cast<std::size_t>(cols))));
    states_.conservativeResize(static_cast<Eigen::Index>(state_size_), grown);
    next_states_.conservativeResize(static_cast<Eigen::Index>(state_size_), grown);
    actions_.resize(static_cast<std::size_t>(grown));
    rewards_.resize(static_cast<std::size_t>(grown));
    terminal_.resize(static_cast<std::size_t>(grown));
  }
  const auto col = static_cast<Eigen::Index>(head_);
  const auto rows = static_cast<Eigen::Index>(state_size_);
  states_.col(col) = Eigen::Map<const Eigen::VectorXd>(state.data(), rows);
  next_states_.col(col) = Eigen::Map<const Eigen::VectorXd>(next_state.data(), rows);
  actions_[head_] = action;
  rewards_[head_] = reward;
  terminal_[head_] = terminal ? 1 : 0;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

Transition ReplayBuffer::at(std::size_t index) const {
  require(index < size_, "ReplayBuffer::at: index out of range");
  const auto col = static_cast<Eigen::Index>(index);
  Transition t;
  t.state.assign(states_.col(col).data(), states_.col(col).data() + state_size_);
  t.next_state.assign(next_states_.col(col).data(), next_states_.col(col).data() + state_size_);
  t.action = actions_[index];
  t.reward = rewards_[index];
  t.terminal = terminal_[index] != 0;
  return t;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch_size, Rng& rng) const {
  require(batch_size >= 1, "ReplayBuffer::sample: batch size must be >= 1");
  require(size_ >= batch_size, "ReplayBuffer::sample: fewer stored transitions than batch size");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<std::size_t> out(batch_size);
  for (auto& i : out) i = pick(rng);
  return out;
}

TransitionBatch ReplayBuffer::gather(std::span<const std::size_t> indices) const {
  TransitionBatch b;
  const auto n = static_cast<Eigen::Index>(indices.size());
  const auto rows = static_cast<Eigen::Index>(state_size_);
  b.states.resize(rows, n);
  b.next_states.resize(rows, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto i = indices[static_cast<std::size_t>(j)];
    require(i < size_, "ReplayBuffer::gather: index out of range");
    b.states.col(j) = states_.col(static_cast<Eigen::Index>(i));
    b.next_states.col(j) = next_states_.col(static_cast<Eigen::Index>(i));
    b.actions.push_back(actions_[i]);
    b.rewards.push_back(rewards_[i]);
    b.terminal.push_back(terminal_[i] != 0);
  }
  return b;
}

TransitionBatch ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  const auto idx = sample_indices(batch_size, rng);
  return gather(idx);
}

}  // namespace drinv
