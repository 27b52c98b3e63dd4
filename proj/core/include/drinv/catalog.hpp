#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "drinv/random.hpp"

namespace drinv {

// Immutable per-product metadata plus the parameters of its demand model.
struct Product {
  int id = 0;
  double unit_volume = 1.0;
  double unit_weight = 1.0;
  int shelf_life = 1;
  double demand_mean = 1.0;
  double demand_season_amp = 0.0;
  int demand_season_period = 1;
  double demand_phase = 0.0;
  double demand_noise_sd = 0.0;

  bool operator==(const Product&) const = default;
};

using Catalog = std::vector<Product>;

// Throws ContractViolation naming the broken invariant.
void validate(const Product& p);

// Products drawn from the documented synthetic ranges; deterministic in `rng`.
Catalog make_synthetic_catalog(int n, Rng& rng);

// Catalog CSV:
//   id,unit_volume,unit_weight,shelf_life,demand_mean,season_amp,season_period,phase,noise_sd
Catalog load_catalog(const std::filesystem::path& path);
void save_catalog(const Catalog& catalog, const std::filesystem::path& path);

// Recorded demand, rows indexed by step. Optional forecast columns are named
// `f<id>`; when absent, forecasts fall back to a trailing moving average.
struct DemandSeries {
  std::vector<int> product_ids;
  std::vector<std::vector<int>> demand;      // [t][product]
  std::vector<std::vector<double>> forecast;  // empty, or [t][product]

  std::size_t steps() const { return demand.size(); }
};

DemandSeries load_demand_series(const std::filesystem::path& path);

}  // namespace drinv
