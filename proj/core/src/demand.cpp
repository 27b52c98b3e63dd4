#include "drinv/demand.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "drinv/error.hpp"

namespace drinv {

double seasonal_mean(const Product& p, int t) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) /
                           static_cast<double>(p.demand_season_period) +
                       p.demand_phase;
  return std::max(0.0, p.demand_mean * (1.0 + p.demand_season_amp * std::sin(angle)));
}

std::vector<double> forecast(const Catalog& catalog, int t) {
  require(t >= 0, "forecast: t must be >= 0");
  std::vector<double> out;
  out.reserve(catalog.size());
  for (const auto& p : catalog) out.push_back(seasonal_mean(p, t));
  return out;
}

std::vector<int> generate_demand(const Catalog& catalog, int t, Rng& rng) {
  require(t >= 0, "generate_demand: t must be >= 0");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<int> out;
  out.reserve(catalog.size());
  for (const auto& p : catalog) {
    const double eps = p.demand_noise_sd * normal(rng);
    out.push_back(static_cast<int>(std::max(0L, std::lround(seasonal_mean(p, t) + eps))));
  }
  return out;
}

DemandSource::DemandSource(Catalog catalog) : catalog_(std::move(catalog)) {}

DemandSource::DemandSource(Catalog catalog, DemandSeries series, int forecast_window)
    : catalog_(std::move(catalog)), series_(std::move(series)), forecast_window_(forecast_window) {
  require(forecast_window_ >= 1, "DemandSource: forecast window must be >= 1");
  require(!series_.demand.empty(), "DemandSource: empty demand series");
  require(series_.product_ids.size() == catalog_.size(),
          "DemandSource: demand series and catalog disagree on product count");
  for (std::size_t i = 0; i < catalog_.size(); ++i)
    require(series_.product_ids[i] == catalog_[i].id,
            "DemandSource: demand column order must match catalog ids");
}

std::size_t DemandSource::row(int t) const {
  return static_cast<std::size_t>(t) % series_.steps();
}

std::vector<double> DemandSource::forecast(int t) const {
  require(t >= 0, "forecast: t must be >= 0");
  if (!recorded()) return drinv::forecast(catalog_, t);
  if (!series_.forecast.empty()) return series_.forecast[row(t)];

  // Trailing mean of the previous window of recorded demand; catalog mean at t = 0.
  std::vector<double> out(catalog_.size(), 0.0);
  const int begin = std::max(0, t - forecast_window_);
  if (begin == t) {
    for (std::size_t i = 0; i < catalog_.size(); ++i) out[i] = catalog_[i].demand_mean;
    return out;
  }
  for (int s = begin; s < t; ++s) {
    const auto& d = series_.demand[row(s)];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  }
  for (auto& v : out) v /= static_cast<double>(t - begin);
  return out;
}

std::vector<int> DemandSource::draw(int t, Rng& rng) const {
  if (!recorded()) return generate_demand(catalog_, t, rng);
  return series_.demand[row(t)];
}

}  // namespace drinv
