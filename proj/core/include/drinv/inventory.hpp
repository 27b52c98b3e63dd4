#pragma once

#include <array>
#include <span>
#include <vector>

#include "drinv/catalog.hpp"

namespace drinv {

inline constexpr int kNumActions = 14;
inline constexpr int kNumBaseFeatures = 7;

// Order quantity as a multiple of the current forecast, indexed by action.
inline constexpr std::array<double, kNumActions> kActionMultipliers = {
    0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0};

struct ConstraintConfig {
  double max_volume = 1.0;
  double max_weight = 1.0;

  bool operator==(const ConstraintConfig&) const = default;
};

// Capacities at `fraction` of the catalog's mean aggregate demand volume and
// weight (sum_i v_i mu_i, sum_i c_i mu_i).
ConstraintConfig default_constraints(const Catalog& catalog, double fraction = 0.7);

struct RewardParams {
  double sale_coeff = 1.0;
  double holding_coeff = 0.05;
  double wastage_coeff = 0.5;
  double stockout_coeff = 0.25;

  bool operator==(const RewardParams&) const = default;
};

// Per-product stock by age. stock[i][a] holds units with shelf_life - a steps
// of life left, so stock[i][0] is the freshest bucket.
struct StoreState {
  int time = 0;
  std::vector<std::vector<int>> stock;

  int on_hand(std::size_t product) const;
  std::vector<int> on_hand() const;
  bool operator==(const StoreState&) const = default;
};

StoreState empty_state(const Catalog& catalog);

// Units per product placed in the freshest bucket at time 0.
StoreState initial_state(const Catalog& catalog, std::span<const int> initial_units);

struct ProductOutcome {
  int arrived = 0;
  int demand = 0;
  int sales = 0;
  int unmet = 0;
  int wastage = 0;
  int holding = 0;

  bool operator==(const ProductOutcome&) const = default;
};

using StepOutcome = std::vector<ProductOutcome>;

int decode_action(int action_index, double forecast);

// Uniform scaling by rho = min(1, Vmax / vol, Cmax / wt), rounded down.
std::vector<int> project_actions(std::span<const int> quantities, const Catalog& catalog,
                                 const ConstraintConfig& constraints);

// Arrivals enter the freshest bucket, demand is served oldest-first with lost
// sales, then every bucket ages one step and expired units become wastage.
std::pair<StoreState, StepOutcome> step(const StoreState& state, std::span<const int> arriving,
                                        std::span<const int> demand);

double reward(const ProductOutcome& outcome, double forecast, const RewardParams& params);

// Mean of the per-product rewards.
double business_reward(std::span<const double> per_product_rewards);

using FeatureVector = std::array<double, kNumBaseFeatures>;

// Fixed per-experiment scales for the seven base features.
struct FeatureScales {
  std::vector<double> per_product;  // 10 * mu_i, for x_i and W_i
  double volume = 1.0;              // catalog max v
  double weight = 1.0;              // catalog max c
  double shelf_life = 1.0;          // catalog max T
  double total_volume = 1.0;        // Vmax
  double total_weight = 1.0;        // Cmax
};

FeatureScales feature_scales(const Catalog& catalog, const ConstraintConfig& constraints);

// Entries in order: on-hand, forecast, unit volume, unit weight, shelf life,
// catalog forecast volume v'W, catalog forecast weight c'W; each scaled.
FeatureVector build_features(std::size_t product, const StoreState& state,
                             std::span<const double> forecast, const Catalog& catalog,
                             const FeatureScales& scales);

}  // namespace drinv
