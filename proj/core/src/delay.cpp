#include "drinv/delay.hpp"

#include <algorithm>

#include "drinv/error.hpp"

namespace drinv {

std::string to_string(DelayMode mode) {
  return mode == DelayMode::action ? "action" : "observation";
}

std::string to_string(DelayKind kind) {
  return kind == DelayKind::constant ? "constant" : "stochastic";
}

DelayMode parse_delay_mode(const std::string& text) {
  if (text == "action" || text == "action_delay") return DelayMode::action;
  if (text == "observation" || text == "observation_delay") return DelayMode::observation;
  throw ConfigError("unknown delay mode '" + text + "'");
}

DelayKind parse_delay_kind(const std::string& text) {
  if (text == "constant") return DelayKind::constant;
  if (text == "stochastic") return DelayKind::stochastic;
  throw ConfigError("unknown delay kind '" + text + "'");
}

void DelayConfig::validate() const {
  if (k_max < 0) throw ContractViolation("delay: k_max must be >= 0");
  if (kind == DelayKind::constant) {
    if (k < 0 || k > k_max) throw ContractViolation("delay: constant mode requires 0 <= k <= k_max");
  } else if (k_max < 1) {
    throw ContractViolation("delay: stochastic mode requires k_max >= 1");
  }
}

int sample_episode_delay(const DelayConfig& cfg, Rng& rng) {
  cfg.validate();
  if (cfg.kind == DelayKind::constant) return cfg.k;
  return std::uniform_int_distribution<int>(1, cfg.k_max)(rng);
}

void ActionPipeline::push(std::span<const int> actions, std::span<const int> quantities, int t,
                          int delay) {
  require(actions.size() == orders_.size() && quantities.size() == orders_.size(),
          "ActionPipeline::push: one decision per product");
  require(delay >= 0, "ActionPipeline::push: delay must be >= 0");
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    require(quantities[i] >= 0, "ActionPipeline::push: negative quantity");
    InFlightOrder order{static_cast<int>(i), quantities[i], actions[i], t, t + delay};
    auto& q = orders_[i];
    auto pos = std::upper_bound(q.begin(), q.end(), order.arrives_at,
                                [](int at, const InFlightOrder& o) { return at < o.arrives_at; });
    q.insert(pos, order);
    pushed_ += quantities[i];
  }
}

std::vector<int> ActionPipeline::pop_due(int t) {
  std::vector<int> arriving(orders_.size(), 0);
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    auto& q = orders_[i];
    auto first = std::find_if(q.begin(), q.end(), [t](const auto& o) { return o.arrives_at == t; });
    auto last = std::find_if(first, q.end(), [t](const auto& o) { return o.arrives_at != t; });
    for (auto it = first; it != last; ++it) arriving[i] += it->quantity;
    q.erase(first, last);
    popped_ += arriving[i];
  }
  return arriving;
}

long long ActionPipeline::in_flight_units() const {
  long long total = 0;
  for (const auto& q : orders_)
    for (const auto& o : q) total += o.quantity;
  return total;
}

void ActionPipeline::clear() {
  for (auto& q : orders_) q.clear();
  pushed_ = popped_ = 0;
}

void augment(const FeatureVector& base, const std::deque<InFlightOrder>& orders, int k_max,
             double quantity_scale, std::span<double> out) {
  require(out.size() == information_state_size(k_max), "augment: output has the wrong length");
  if (orders.size() > static_cast<std::size_t>(k_max))
    throw ContractViolation("augment: " + std::to_string(orders.size()) +
                            " in-flight orders exceed buffer length " + std::to_string(k_max));
  std::fill(out.begin(), out.end(), 0.0);
  std::copy(base.begin(), base.end(), out.begin());
  std::size_t offset = kNumBaseFeatures;
  for (const auto& o : orders) {
    out[offset + static_cast<std::size_t>(o.action)] = 1.0;
    out[offset + kNumActions] = static_cast<double>(o.quantity) / quantity_scale;
    offset += kSlotWidth;
  }
}

std::vector<double> augment(const FeatureVector& base, const std::deque<InFlightOrder>& orders,
                            int k_max, double quantity_scale) {
  std::vector<double> out(information_state_size(k_max));
  augment(base, orders, k_max, quantity_scale, out);
  return out;
}

DelayedInventoryEnv::DelayedInventoryEnv(DemandSource source, EnvConfig config, DelayConfig delay)
    : source_(std::move(source)), config_(config), delay_cfg_(delay) {
  delay_cfg_.validate();
  require(!source_.catalog().empty(), "DelayedInventoryEnv: empty catalog");
  for (const auto& p : source_.catalog()) validate(p);
  require(config_.constraints.max_volume > 0.0 && config_.constraints.max_weight > 0.0,
          "DelayedInventoryEnv: capacities must be > 0");
  require(config_.initial_cover >= 0.0, "DelayedInventoryEnv: initial_cover must be >= 0");
  scales_ = feature_scales(source_.catalog(), config_.constraints);
  for (const auto& p : source_.catalog())
    quantity_scale_.push_back(std::max(1e-9, kActionMultipliers.back() * p.demand_mean));
  reset(delay_cfg_.kind == DelayKind::constant ? delay_cfg_.k : 1);
}

void DelayedInventoryEnv::reset(int episode_delay) {
  require(episode_delay >= 0 && episode_delay <= std::max(delay_cfg_.k_max, delay_cfg_.k),
          "DelayedInventoryEnv::reset: delay outside [0, k_max]");
  delay_ = episode_delay;
  const auto fc = source_.forecast(0);
  std::vector<int> opening;
  for (double f : fc) opening.push_back(static_cast<int>(std::lround(config_.initial_cover * f)));
  state_ = initial_state(source_.catalog(), opening);
  pipeline_ = ActionPipeline(num_products());
  action_log_.assign(num_products(), {});
  feature_history_.clear();
  if (delay_cfg_.mode == DelayMode::observation) record_features();
}

void DelayedInventoryEnv::record_features() {
  const auto fc = source_.forecast(state_.time);
  std::vector<FeatureVector> now;
  now.reserve(num_products());
  for (std::size_t i = 0; i < num_products(); ++i)
    now.push_back(build_features(i, state_, fc, source_.catalog(), scales_));
  feature_history_.push_back(std::move(now));
  while (feature_history_.size() > static_cast<std::size_t>(delay_) + 1) feature_history_.pop_front();
}

std::size_t DelayedInventoryEnv::observation_size(bool augmented) const {
  return augmented ? information_state_size(delay_cfg_.k_max) : kNumBaseFeatures;
}

void DelayedInventoryEnv::observe(bool augmented, std::span<double> out) const {
  const std::size_t width = observation_size(augmented);
  const std::size_t n = num_products();
  require(out.size() == width * n, "DelayedInventoryEnv::observe: output has the wrong length");
  const int k_max = augmented ? delay_cfg_.k_max : 0;
  static const std::deque<InFlightOrder> kNoOrders;

  std::vector<double> fc;
  const bool stale = delay_cfg_.mode == DelayMode::observation;
  if (!stale) fc = source_.forecast(state_.time);
  // Before the first delayed observation exists the agent sees a zero state.
  const bool blind = stale && state_.time < delay_;

  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector base{};
    if (!stale)
      base = build_features(i, state_, fc, source_.catalog(), scales_);
    else if (!blind)
      base = feature_history_.front()[i];
    const auto& orders = augmented ? pending(i) : kNoOrders;
    augment(base, orders, k_max, quantity_scale_[i], out.subspan(i * width, width));
  }
}

const std::deque<InFlightOrder>& DelayedInventoryEnv::pending(std::size_t product) const {
  return delay_cfg_.mode == DelayMode::action ? pipeline_.orders(product) : action_log_.at(product);
}

std::vector<double> DelayedInventoryEnv::observe(bool augmented) const {
  std::vector<double> out(observation_size(augmented) * num_products());
  observe(augmented, out);
  return out;
}

StepResult DelayedInventoryEnv::step(std::span<const int> decisions, Rng& demand_rng) {
  const std::size_t n = num_products();
  require(decisions.size() == n, "DelayedInventoryEnv::step: one decision per product");
  const int t = state_.time;
  const auto fc = source_.forecast(t);

  std::vector<int> quantities(n);
  for (std::size_t i = 0; i < n; ++i) quantities[i] = decode_action(decisions[i], fc[i]);

  StepResult result;
  result.ordered = project_actions(quantities, source_.catalog(), config_.constraints);

  std::vector<int> arriving;
  if (delay_cfg_.mode == DelayMode::action) {
    pipeline_.push(decisions, result.ordered, t, delay_);
    arriving = pipeline_.pop_due(t);
  } else {
    // Delivered now; the log keeps the decisions made since the observed state.
    arriving = result.ordered;
    for (std::size_t i = 0; i < n; ++i) {
      auto& log = action_log_[i];
      log.push_back({static_cast<int>(i), result.ordered[i], decisions[i], t, t});
      while (log.size() > static_cast<std::size_t>(delay_)) log.pop_front();
    }
  }

  const auto demand = source_.draw(t, demand_rng);
  auto [next, outcome] = drinv::step(state_, arriving, demand);
  state_ = std::move(next);

  result.rewards.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.rewards[i] = reward(outcome[i], fc[i], config_.reward);
  result.business_reward = business_reward(result.rewards);
  result.outcome = std::move(outcome);

  if (delay_cfg_.mode == DelayMode::observation) record_features();
  return result;
}

}  // namespace drinv
