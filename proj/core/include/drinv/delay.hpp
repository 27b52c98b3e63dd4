#pragma once

#include <deque>
#include <span>
#include <string>
#include <vector>

#include "drinv/catalog.hpp"
#include "drinv/demand.hpp"
#include "drinv/inventory.hpp"

namespace drinv {

enum class DelayMode { action, observation };
enum class DelayKind { constant, stochastic };

std::string to_string(DelayMode mode);
std::string to_string(DelayKind kind);
DelayMode parse_delay_mode(const std::string& text);
DelayKind parse_delay_kind(const std::string& text);

// `k_max` is both the stochastic upper bound and the information-state buffer
// length, in either kind.
struct DelayConfig {
  DelayMode mode = DelayMode::action;
  DelayKind kind = DelayKind::constant;
  int k = 0;
  int k_max = 0;

  void validate() const;
  bool operator==(const DelayConfig&) const = default;
};

// Constant: cfg.k. Stochastic: uniform on {1, ..., k_max}. Call once per episode.
int sample_episode_delay(const DelayConfig& cfg, Rng& rng);

struct InFlightOrder {
  int product = 0;
  int quantity = 0;  // after the capacity projection
  int action = 0;    // the agent's own decision
  int placed_at = 0;
  int arrives_at = 0;

  bool operator==(const InFlightOrder&) const = default;
};

// Un-implemented orders per product, kept sorted by arrival step.
class ActionPipeline {
 public:
  explicit ActionPipeline(std::size_t products = 0) : orders_(products) {}

  void push(std::span<const int> actions, std::span<const int> quantities, int t, int delay);

  // Removes and sums, per product, every order with arrives_at == t.
  std::vector<int> pop_due(int t);

  const std::deque<InFlightOrder>& orders(std::size_t product) const { return orders_.at(product); }
  std::size_t products() const { return orders_.size(); }
  long long in_flight_units() const;
  long long pushed_units() const { return pushed_; }
  long long popped_units() const { return popped_; }
  void clear();

 private:
  std::vector<std::deque<InFlightOrder>> orders_;
  long long pushed_ = 0;
  long long popped_ = 0;
};

inline constexpr int kSlotWidth = kNumActions + 1;

inline constexpr std::size_t information_state_size(int k_max) {
  return kNumBaseFeatures + static_cast<std::size_t>(kSlotWidth) * static_cast<std::size_t>(k_max);
}

// Writes base ++ k_max slots into `out`. Slot j holds one-hot(action) followed
// by quantity / quantity_scale for the j-th oldest entry of `orders`; unused
// slots are zero. Throws ContractViolation when orders.size() > k_max.
void augment(const FeatureVector& base, const std::deque<InFlightOrder>& orders, int k_max,
             double quantity_scale, std::span<double> out);

std::vector<double> augment(const FeatureVector& base, const std::deque<InFlightOrder>& orders,
                            int k_max, double quantity_scale);

struct EnvConfig {
  ConstraintConfig constraints;
  RewardParams reward;
  // Opening stock, in multiples of the step-0 forecast.
  double initial_cover = 2.0;

  bool operator==(const EnvConfig&) const = default;
};

struct StepResult {
  StepOutcome outcome;
  std::vector<int> ordered;  // post-projection quantities of this step's decisions
  std::vector<double> rewards;
  double business_reward = 0.0;
};

// The store simulator behind an action-delay (lead time) or observation-delay
// wrapper. One episode at a time; the delay is fixed at reset().
class DelayedInventoryEnv {
 public:
  DelayedInventoryEnv(DemandSource source, EnvConfig config, DelayConfig delay);

  void reset(int episode_delay);

  // Agent inputs, product-major: product i occupies
  // [i * observation_size(augmented), (i + 1) * observation_size(augmented)).
  std::size_t observation_size(bool augmented) const;
  void observe(bool augmented, std::span<double> out) const;
  std::vector<double> observe(bool augmented) const;

  StepResult step(std::span<const int> decisions, Rng& demand_rng);

  int time() const { return state_.time; }
  int delay() const { return delay_; }
  std::size_t num_products() const { return source_.catalog().size(); }
  const Catalog& catalog() const { return source_.catalog(); }
  const DelayConfig& delay_config() const { return delay_cfg_; }
  const EnvConfig& config() const { return config_; }
  const StoreState& state() const { return state_; }
  const ActionPipeline& pipeline() const { return pipeline_; }
  // Entries that fill the information-state buffer of `product`.
  const std::deque<InFlightOrder>& pending(std::size_t product) const;
  const FeatureScales& scales() const { return scales_; }
  const DemandSource& demand_source() const { return source_; }

 private:
  void record_features();

  DemandSource source_;
  EnvConfig config_;
  DelayConfig delay_cfg_;
  FeatureScales scales_;
  std::vector<double> quantity_scale_;

  int delay_ = 0;
  StoreState state_;
  // Action delay: orders not yet delivered.
  ActionPipeline pipeline_;
  // Observation delay: the decisions made since the observed (stale) state.
  std::vector<std::deque<InFlightOrder>> action_log_;
  // Observation delay only: base features for times t - delay_, ..., t.
  std::deque<std::vector<FeatureVector>> feature_history_;
};

}  // namespace drinv
