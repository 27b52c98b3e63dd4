#include "drinv/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drinv/error.hpp"

namespace drinv {
namespace {

struct Load {
  double volume = 0.0;
  double weight = 0.0;
};

Load load_of(std::span<const int> q, const Catalog& catalog) {
  Load load;
  for (std::size_t i = 0; i < q.size(); ++i) {
    load.volume += catalog[i].unit_volume * q[i];
    load.weight += catalog[i].unit_weight * q[i];
  }
  return load;
}

bool feasible(const Load& load, const ConstraintConfig& c) {
  return load.volume <= c.max_volume && load.weight <= c.max_weight;
}

}  // namespace

ConstraintConfig default_constraints(const Catalog& catalog, double fraction) {
  require(fraction > 0.0, "default_constraints: fraction must be > 0");
  ConstraintConfig c{0.0, 0.0};
  for (const auto& p : catalog) {
    c.max_volume += p.unit_volume * p.demand_mean;
    c.max_weight += p.unit_weight * p.demand_mean;
  }
  c.max_volume *= fraction;
  c.max_weight *= fraction;
  require(c.max_volume > 0.0 && c.max_weight > 0.0,
          "default_constraints: catalog has zero mean demand");
  return c;
}

int StoreState::on_hand(std::size_t product) const {
  const auto& s = stock.at(product);
  return std::accumulate(s.begin(), s.end(), 0);
}

std::vector<int> StoreState::on_hand() const {
  std::vector<int> out;
  out.reserve(stock.size());
  for (std::size_t i = 0; i < stock.size(); ++i) out.push_back(on_hand(i));
  return out;
}

StoreState empty_state(const Catalog& catalog) {
  StoreState s;
  s.stock.reserve(catalog.size());
  for (const auto& p : catalog) s.stock.emplace_back(static_cast<std::size_t>(p.shelf_life), 0);
  return s;
}

StoreState initial_state(const Catalog& catalog, std::span<const int> initial_units) {
  require(initial_units.size() == catalog.size(), "initial_state: one entry per product");
  auto s = empty_state(catalog);
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    require(initial_units[i] >= 0, "initial_state: negative stock");
    s.stock[i][0] = initial_units[i];
  }
  return s;
}

int decode_action(int action_index, double forecast) {
  require(action_index >= 0 && action_index < kNumActions,
          "decode_action: action index out of range [0,13]");
  require(forecast >= 0.0 && std::isfinite(forecast), "decode_action: forecast must be >= 0");
  return static_cast<int>(
      std::lround(kActionMultipliers[static_cast<std::size_t>(action_index)] * forecast));
}

std::vector<int> project_actions(std::span<const int> quantities, const Catalog& catalog,
                                 const ConstraintConfig& constraints) {
  require(quantities.size() == catalog.size(), "project_actions: one quantity per product");
  for (int q : quantities) require(q >= 0, "project_actions: quantities must be >= 0");

  std::vector<int> out(quantities.begin(), quantities.end());
  const Load load = load_of(out, catalog);
  if (feasible(load, constraints)) return out;

  double rho = 1.0;
  if (load.volume > 0.0) rho = std::min(rho, constraints.max_volume / load.volume);
  if (load.weight > 0.0) rho = std::min(rho, constraints.max_weight / load.weight);
  // Floor keeps the exact result feasible; the loop absorbs floating-point
  // rounding so the output always passes the same feasibility test.
  for (;;) {
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = static_cast<int>(std::floor(rho * quantities[i]));
    if (feasible(load_of(out, catalog), constraints)) return out;
    rho = std::nextafter(rho, 0.0) * (1.0 - 1e-12);
  }
}

std::pair<StoreState, StepOutcome> step(const StoreState& state, std::span<const int> arriving,
                                        std::span<const int> demand) {
  const std::size_t n = state.stock.size();
  require(arriving.size() == n && demand.size() == n, "step: one entry per product");

  StoreState next = state;
  StepOutcome outcome(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(arriving[i] >= 0 && demand[i] >= 0, "step: arrivals and demand must be >= 0");
    auto& buckets = next.stock[i];
    auto& o = outcome[i];
    o.arrived = arriving[i];
    o.demand = demand[i];

    buckets.front() += arriving[i];

    int remaining = demand[i];
    for (auto it = buckets.rbegin(); it != buckets.rend() && remaining > 0; ++it) {
      const int take = std::min(*it, remaining);
      *it -= take;
      remaining -= take;
    }
    o.sales = demand[i] - remaining;
    o.unmet = remaining;

    o.wastage = buckets.back();
    std::shift_right(buckets.begin(), buckets.end(), 1);
    buckets.front() = 0;
    o.holding = std::accumulate(buckets.begin(), buckets.end(), 0);
  }
  ++next.time;
  return {std::move(next), std::move(outcome)};
}

double reward(const ProductOutcome& o, double forecast, const RewardParams& p) {
  require(forecast >= 0.0, "reward: forecast must be >= 0");
  const double raw = p.sale_coeff * o.sales - p.holding_coeff * o.holding -
                     p.wastage_coeff * o.wastage - p.stockout_coeff * o.unmet;
  return raw / std::max(1.0, forecast);
}

double business_reward(std::span<const double> per_product_rewards) {
  if (per_product_rewards.empty()) return 0.0;
  double sum = 0.0;
  for (double r : per_product_rewards) sum += r;
  return sum / static_cast<double>(per_product_rewards.size());
}

FeatureScales feature_scales(const Catalog& catalog, const ConstraintConfig& constraints) {
  require(!catalog.empty(), "feature_scales: empty catalog");
  FeatureScales s;
  s.volume = s.weight = s.shelf_life = 0.0;
  for (const auto& p : catalog) {
    s.per_product.push_back(std::max(1e-9, 10.0 * p.demand_mean));
    s.volume = std::max(s.volume, p.unit_volume);
    s.weight = std::max(s.weight, p.unit_weight);
    s.shelf_life = std::max(s.shelf_life, static_cast<double>(p.shelf_life));
  }
  s.total_volume = constraints.max_volume;
  s.total_weight = constraints.max_weight;
  return s;
}

FeatureVector build_features(std::size_t product, const StoreState& state,
                             std::span<const double> forecast, const Catalog& catalog,
                             const FeatureScales& scales) {
  require(product < catalog.size(), "build_features: product index out of range");
  require(forecast.size() == catalog.size(), "build_features: one forecast per product");
  double total_volume = 0.0, total_weight = 0.0;
  for (std::size_t j = 0; j < catalog.size(); ++j) {
    total_volume += catalog[j].unit_volume * forecast[j];
    total_weight += catalog[j].unit_weight * forecast[j];
  }
  const auto& p = catalog[product];
  const double scale = scales.per_product[product];
  return {static_cast<double>(state.on_hand(product)) / scale,
          forecast[product] / scale,
          p.unit_volume / scales.volume,
          p.unit_weight / scales.weight,
          static_cast<double>(p.shelf_life) / scales.shelf_life,
          total_volume / scales.total_volume,
          total_weight / scales.total_weight};
}

}  // namespace drinv
