#pragma once

#include <span>
#include <vector>

namespace copsurv::stats {

double mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> values);
double median(std::span<const double> values);
double pearson(std::span<const double> x, std::span<const double> y);

// Kendall's tau-b in O(n log n) (Knight's merge-sort algorithm).
double kendall_tau(std::span<const double> x, std::span<const double> y);

struct KsResult {
  double statistic;
  double p_value;
};

// One-sample Kolmogorov-Smirnov test against Uniform(0, 1).
KsResult ks_uniform(std::span<const double> sample);

// Fixed-order pairwise summation; result is independent of thread count.
double pairwise_sum(std::span<const double> values);

}  // namespace copsurv::stats
