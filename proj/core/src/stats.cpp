#include "copsurv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "copsurv/error.hpp"

namespace copsurv::stats {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 64;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of an empty sample");
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double median(std::span<const double> values) {
  if (values.empty()) throw ValidationError("median of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("pearson: need two equally sized samples of length >= 2");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

namespace {

// Counts inversions of `v` while merge-sorting it.
std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                          std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

// Sum over runs of equal values of n_run * (n_run - 1) / 2; `v` must be sorted.
std::uint64_t tied_pairs(const std::vector<double>& v) {
  std::uint64_t ties = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= v.size(); ++i) {
    if (i < v.size() && v[i] == v[i - 1]) {
      ++run;
    } else {
      ties += static_cast<std::uint64_t>(run) * (run - 1) / 2;
      run = 1;
    }
  }
  return ties;
}

}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("kendall_tau: need two equally sized samples of length >= 2");
  }
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  // Pairs tied in x, and tied jointly in (x, y).
  std::uint64_t ties_x = 0, ties_xy = 0;
  {
    std::size_t run_x = 1, run_xy = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      const bool same_x = i < n && x[order[i]] == x[order[i - 1]];
      const bool same_xy = same_x && y[order[i]] == y[order[i - 1]];
      if (same_xy) {
        ++run_xy;
      } else {
        ties_xy += static_cast<std::uint64_t>(run_xy) * (run_xy - 1) / 2;
        run_xy = 1;
      }
      if (same_x) {
        ++run_x;
      } else {
        ties_x += static_cast<std::uint64_t>(run_x) * (run_x - 1) / 2;
        run_x = 1;
      }
    }
  }

  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const std::uint64_t discordant = merge_count(ys, buf, 0, n);
  const std::uint64_t ties_y = tied_pairs(ys);

  const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double tx = static_cast<double>(ties_x);
  const double ty = static_cast<double>(ties_y);
  const double txy = static_cast<double>(ties_xy);
  // concordant - discordant = total - tx - ty + txy - 2 * discordant
  const double numerator = total - tx - ty + txy - 2.0 * static_cast<double>(discordant);
  const double denominator = std::sqrt((total - tx) * (total - ty));
  if (denominator == 0.0) throw UndefinedMetric("kendall_tau: a sample is constant");
  return numerator / denominator;
}

KsResult ks_uniform(std::span<const double> sample) {
  if (sample.empty()) throw ValidationError("ks_uniform: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double u = std::clamp(sorted[i], 0.0, 1.0);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - u, u - static_cast<double>(i) / n});
  }
  // Asymptotic Kolmogorov distribution with Stephens' small-sample correction.
  const double sn = std::sqrt(n);
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double p = 0.0;
  if (lambda < 1e-3) {
    p = 1.0;
  } else {
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      p += (k % 2 == 1 ? 2.0 : -2.0) * term;
      if (term < 1e-16) break;
    }
    p = std::clamp(p, 0.0, 1.0);
  }
  return {d, p};
}

}  // namespace copsurv::stats
