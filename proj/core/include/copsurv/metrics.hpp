#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "copsurv/copula.hpp"
#include "copsurv/dataset.hpp"
#include "copsurv/weibull_cox.hpp"

namespace copsurv {

struct SurvivalL1Config {
  double normalizing_quantile = 0.01;
  int n_steps = 1000;
  void validate() const;
};

// Survival curve of one record as a function of time, and its inverse.
struct SurvivalCurve {
  std::function<double(double)> survival;
  std::function<double(double)> inverse;
};

// (1/N) sum_i (1/T_max_i) * sum_{k=1..n} |S_i(t_k) - S^_i(t_k)| * T_max_i / n,
// t_k = k T_max_i / n, T_max_i = S_i^{-1}(Q).
double survival_l1(std::span<const SurvivalCurve> truth, std::span<const SurvivalCurve> estimate,
                   const SurvivalL1Config& cfg = {});
// Per-record curves of two Weibull-Cox models over the records' covariates.
double survival_l1(const WeibullCoxModel& truth, const WeibullCoxModel& estimate,
                   const SurvivalDataset& data, const SurvivalL1Config& cfg = {});

// Harrell's c-index: over pairs with t_i < t_j and delta_i = 1, the share
// where risk_i > risk_j, ties in risk counting one half.
double concordance_index(std::span<const double> risk, const SurvivalDataset& data);
double concordance_index(const WeibullCoxModel& model, const SurvivalDataset& data);

// Single-time unweighted Brier score; records censored at or before
// eval_time are excluded.
double brier_score(std::span<const double> predicted_survival, const SurvivalDataset& data,
                   double eval_time);
double brier_score(const WeibullCoxModel& model, const SurvivalDataset& data, double eval_time);

double r_squared(std::span<const double> y, std::span<const double> prediction);
// Predictions are median survival times of the model.
double r_squared(const WeibullCoxModel& model, const RegressionDataset& data);

struct MetricBiasRow {
  std::uint64_t seed = 0;
  double tau = 0.0;
  double c_index_uncensored = 0.0;
  double c_index_censored = 0.0;
  double brier_uncensored = 0.0;
  double brier_censored = 0.0;
  double eval_time = 0.0;
  double censoring_fraction = 0.0;

  double c_index_abs_diff() const;
  double brier_abs_diff() const;
};

// For each tau, draws n records from the metric-bias generator coupled by
// `family` at that tau and scores the ground-truth event model on the
// latent event times and on the censored observations. Brier is taken at
// the median observed time of the censored data for both.
std::vector<MetricBiasRow> metric_bias_experiment(std::span<const double> taus,
                                                  std::uint64_t seed, std::size_t n = 10000,
                                                  CopulaFamily family = CopulaFamily::Clayton);

}  // namespace copsurv
