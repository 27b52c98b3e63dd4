#pragma once

#include <span>
#include <vector>

namespace drinv::stats {

double mean(std::span<const double> xs);
// Sample standard deviation (n - 1); 0 for fewer than two values.
double stddev(std::span<const double> xs);

struct Interval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
  std::size_t n = 0;
};

// Normal-approximation 95% interval: mean +/- 1.96 sd / sqrt(n).
Interval confidence95(std::span<const double> xs);

// Trailing window: entry e averages xs[max(0, e - window + 1) .. e].
std::vector<double> moving_average(std::span<const double> xs, std::size_t window);

// Mean of the last ceil(fraction * n) entries.
double tail_mean(std::span<const double> xs, double fraction = 0.1);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Goodness of fit of observed counts against equal expected counts.
ChiSquare chi_square_uniform(std::span<const long> counts);

}  // namespace drinv::stats
