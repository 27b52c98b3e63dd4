#pragma once

#include <vector>

#include "drinv/catalog.hpp"

namespace drinv {

// Deterministic seasonal component mu * (1 + amp * sin(2 pi t / period + phase)),
// clamped at zero. This is the single-step forecast W_i(t).
double seasonal_mean(const Product& p, int t);

std::vector<double> forecast(const Catalog& catalog, int t);

// max(0, round(seasonal_mean + eps)), eps ~ Normal(0, noise_sd). One standard
// normal is drawn per product regardless of noise_sd so the stream position
// depends only on catalog size and step count.
std::vector<int> generate_demand(const Catalog& catalog, int t, Rng& rng);

// Where an environment gets its demand and forecasts from: the synthetic
// generator above, or a recorded series.
class DemandSource {
 public:
  explicit DemandSource(Catalog catalog);
  DemandSource(Catalog catalog, DemandSeries series, int forecast_window = 7);

  const Catalog& catalog() const { return catalog_; }
  bool recorded() const { return !series_.demand.empty(); }

  std::vector<double> forecast(int t) const;
  std::vector<int> draw(int t, Rng& rng) const;

 private:
  std::size_t row(int t) const;

  Catalog catalog_;
  DemandSeries series_;
  int forecast_window_ = 7;
};

}  // namespace drinv
