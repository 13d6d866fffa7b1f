#pragma once

#include <span>
#include <vector>

#include "copsurv/risk.hpp"

namespace copsurv {

// Weibull proportional-hazards marginal:
//   H(t | x) = (t / rho)^nu * exp(g(x)),  S = exp(-H),  h = dH/dt,  f = h * S.
// Shape and scale are stored on the log scale.
class WeibullCoxModel {
 public:
  WeibullCoxModel(double nu, double rho, RiskFunction risk);
  static WeibullCoxModel from_log(double log_nu, double log_rho, RiskFunction risk);

  double nu() const;
  double rho() const;
  double log_nu() const { return log_nu_; }
  double log_rho() const { return log_rho_; }
  const RiskFunction& risk() const { return risk_; }
  RiskFunction& risk() { return risk_; }
  std::size_t input_dim() const { return risk_.input_dim(); }

  double risk_score(std::span<const double> x) const { return risk_(x); }

  double hazard(double t, std::span<const double> x) const;
  double cumulative_hazard(double t, std::span<const double> x) const;
  double survival(double t, std::span<const double> x) const;
  double log_survival(double t, std::span<const double> x) const;
  double density(double t, std::span<const double> x) const;
  double log_density(double t, std::span<const double> x) const;
  double inverse_survival(double q, std::span<const double> x) const;

  // Same quantities given a precomputed risk score g.
  double cumulative_hazard_at(double t, double g) const;
  double inverse_survival_at(double q, double g) const;

  // Flattened as [log_nu, log_rho, risk parameters...].
  std::size_t num_parameters() const { return 2 + risk_.num_parameters(); }
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> values);

  bool operator==(const WeibullCoxModel&) const = default;

 private:
  double log_nu_;
  double log_rho_;
  RiskFunction risk_;
};

// Log-time location-scale form of the same model:
//   log H = (log t - mu - f(x)) / sigma,  sigma = 1/nu, mu = log rho, f(x) = -g(x)/nu.
struct StableParams {
  double sigma;
  double mu;
  double f_of_x;

  static StableParams from_model(const WeibullCoxModel& model, std::span<const double> x);
  // Recovers (nu, rho, g(x)).
  double nu() const { return 1.0 / sigma; }
  double rho() const;
  double risk() const { return -f_of_x / sigma; }

  double cumulative_hazard(double t) const;
  double survival(double t) const;
  // h = H / (t * sigma).
  double hazard(double t) const;
  double density(double t) const;
  double inverse_survival(double q) const;
};

}  // namespace copsurv
