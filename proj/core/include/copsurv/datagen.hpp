#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "copsurv/copula.hpp"
#include "copsurv/dataset.hpp"
#include "copsurv/train.hpp"
#include "copsurv/weibull_cox.hpp"

namespace copsurv {

// Covariates are drawn from U[0, 1]^d.
struct SyntheticGenConfig {
  std::string preset = "custom";
  std::size_t n = 1000;
  std::size_t d = 10;
  double nu_event = 1.0;
  double rho_event = 1.0;
  RiskFunction risk_event = RiskFunction::linear(std::vector<double>(10, 0.0));
  double nu_censor = 1.0;
  double rho_censor = 1.0;
  RiskFunction risk_censor = RiskFunction::linear(std::vector<double>(10, 0.0));
  CopulaSpec copula;
  std::uint64_t seed = 0;

  void validate() const;
  WeibullCoxModel event_truth() const { return {nu_event, rho_event, risk_event}; }
  WeibullCoxModel censor_truth() const { return {nu_censor, rho_censor, risk_censor}; }

  bool operator==(const SyntheticGenConfig&) const = default;
};

struct SyntheticData {
  SurvivalDataset data;
  WeibullCoxModel event_truth;
  WeibullCoxModel censor_truth;
  CopulaSpec copula;
  std::vector<LatentPair> latent;
};

// x ~ U[0,1]^d, (u1, u2) ~ C, T_E = S_E^{-1}(u1 | x), T_C = S_C^{-1}(u2 | x),
// observed (x, min(T_E, T_C), 1[T_E < T_C]). Record i draws from stream i of the seed.
SyntheticData generate_synthetic(const SyntheticGenConfig& cfg);

// Linear risk, d = 10, (nu, rho) = (4, 14) event and (3, 16) censor, beta ~ U[0,1]^10.
SyntheticGenConfig preset_linear_risk(std::uint64_t seed);
// Event risk sum x_i^2 / 8, censor risk beta' x^2 / 5; (4, 17) event and (3, 16) censor.
SyntheticGenConfig preset_nonlinear_risk(std::uint64_t seed);
// Event risk x_1^2 + x_2^2, censor risk sum_{i<=3} beta_i x_i^2; (4, 17) and (3, 16).
SyntheticGenConfig preset_metric_bias(std::uint64_t seed);
// "linear_risk" | "nonlinear_risk" | "metric_bias".
SyntheticGenConfig preset_by_name(const std::string& name, std::uint64_t seed);

struct CensorOptions {
  // Allow zero targets by shifting every y by 1e-3 * max(y).
  bool shift_zeros = false;
  TrainConfig fit{};
};

struct CensoredRegression {
  SurvivalDataset data;  // standardized covariates
  WeibullCoxModel event_model;
  WeibullCoxModel censor_model;
  Standardization standardization;
  std::vector<double> y;  // targets after any shift
  double shift = 0.0;
  double censoring_fraction = 0.0;
  std::vector<double> censor_times;  // latent T_C per record
};

struct Observation {
  double time;
  int event;
};

// (min(y, t_c), 1[y <= t_c]): ties count as events.
inline Observation observe_regression(double y, double t_c) {
  return y <= t_c ? Observation{y, 1} : Observation{t_c, 0};
}

// Fits a linear Weibull-Cox event model treating every target as an event,
// copies it to a censor model with nu / 0.6, then draws
// u2 ~ C(. | S_E(y | x)) and T_C = S_C^{-1}(u2 | x); emits
// (x, min(y, T_C), 1[y <= T_C]).
CensoredRegression censor_regression(RegressionDataset data, const CopulaSpec& spec,
                                     std::uint64_t seed, const CensorOptions& options = {});

// Stand-in regression data: standardized covariates and positive targets
// drawn from a linear Weibull-Cox model with a strong signal.
RegressionDataset synthetic_regression(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace copsurv
