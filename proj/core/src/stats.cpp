#include "drinv/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>

#include "drinv/error.hpp"

namespace drinv::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

Interval confidence95(std::span<const double> xs) {
  Interval out;
  out.n = xs.size();
  out.mean = mean(xs);
  const double half = xs.empty() ? 0.0 : 1.96 * stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
  out.low = out.mean - half;
  out.high = out.mean + half;
  return out;
}

std::vector<double> moving_average(std::span<const double> xs, std::size_t window) {
  require(window >= 1, "moving_average: window must be >= 1");
  std::vector<double> out(xs.size());
  double sum = 0.0;
  for (std::size_t e = 0; e < xs.size(); ++e) {
    sum += xs[e];
    if (e >= window) sum -= xs[e - window];
    out[e] = sum / static_cast<double>(std::min(e + 1, window));
  }
  return out;
}

double tail_mean(std::span<const double> xs, double fraction) {
  require(!xs.empty(), "tail_mean: empty series");
  require(fraction > 0.0 && fraction <= 1.0, "tail_mean: fraction must be in (0,1]");
  const auto n = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(xs.size()) - 1e-9)));
  return mean(xs.subspan(xs.size() - n));
}

namespace {

std::vector<double> ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size() && xs.size() >= 2, "spearman: need two equal-length series");
  const auto rx = ranks(xs), ry = ranks(ys);
  const double mx = mean(rx), my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

ChiSquare chi_square_uniform(std::span<const long> counts) {
  require(counts.size() >= 2, "chi_square_uniform: need at least two categories");
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), 0L));
  require(total > 0.0, "chi_square_uniform: no observations");
  const double expected = total / static_cast<double>(counts.size());
  ChiSquare out;
  for (long c : counts) out.statistic += (c - expected) * (c - expected) / expected;
  out.dof = static_cast<int>(counts.size()) - 1;
  boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

}  // namespace drinv::stats
