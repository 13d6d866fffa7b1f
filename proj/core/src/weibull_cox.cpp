#include "copsurv/weibull_cox.hpp"

#include <cmath>
#include <string>

#include "copsurv/error.hpp"

namespace copsurv {

namespace {

void require_positive_time(double t, const char* what) {
  if (!(t > 0.0)) throw DomainError(std::string(what) + " requires t > 0");
}

void require_nonnegative_time(double t, const char* what) {
  if (!(t >= 0.0)) throw DomainError(std::string(what) + " requires t >= 0");
}

}  // namespace

WeibullCoxModel::WeibullCoxModel(double nu, double rho, RiskFunction risk)
    : log_nu_(0.0), log_rho_(0.0), risk_(std::move(risk)) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("Weibull shape nu must be positive");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("Weibull scale rho must be positive");
  log_nu_ = std::log(nu);
  log_rho_ = std::log(rho);
}

WeibullCoxModel WeibullCoxModel::from_log(double log_nu, double log_rho, RiskFunction risk) {
  if (!std::isfinite(log_nu) || !std::isfinite(log_rho)) {
    throw DomainError("Weibull log parameters must be finite");
  }
  WeibullCoxModel m(1.0, 1.0, std::move(risk));
  m.log_nu_ = log_nu;
  m.log_rho_ = log_rho;
  return m;
}

double WeibullCoxModel::nu() const { return std::exp(log_nu_); }
double WeibullCoxModel::rho() const { return std::exp(log_rho_); }

double WeibullCoxModel::cumulative_hazard_at(double t, double g) const {
  if (t == 0.0) return 0.0;
  return std::exp(nu() * (std::log(t) - log_rho_) + g);
}

double WeibullCoxModel::inverse_survival_at(double q, double g) const {
  if (!(q > 0.0) || q > 1.0) throw DomainError("inverse_survival requires 0 < q <= 1");
  if (q == 1.0) return 0.0;
  // t = rho * (-log q / e^g)^(1/nu)
  return std::exp(log_rho_ + (std::log(-std::log(q)) - g) / nu());
}

double WeibullCoxModel::hazard(double t, std::span<const double> x) const {
  require_positive_time(t, "hazard");
  const double n = nu();
  return std::exp(log_nu_ - log_rho_ + (n - 1.0) * (std::log(t) - log_rho_) + risk_(x));
}

double WeibullCoxModel::cumulative_hazard(double t, std::span<const double> x) const {
  require_nonnegative_time(t, "cumulative_hazard");
  return cumulative_hazard_at(t, risk_(x));
}

double WeibullCoxModel::survival(double t, std::span<const double> x) const {
  return std::exp(-cumulative_hazard(t, x));
}

double WeibullCoxModel::log_survival(double t, std::span<const double> x) const {
  return -cumulative_hazard(t, x);
}

double WeibullCoxModel::log_density(double t, std::span<const double> x) const {
  require_positive_time(t, "density");
  const double a = nu() * (std::log(t) - log_rho_) + risk_(x);
  return log_nu_ - std::log(t) + a - std::exp(a);
}

double WeibullCoxModel::density(double t, std::span<const double> x) const {
  return std::exp(log_density(t, x));
}

double WeibullCoxModel::inverse_survival(double q, std::span<const double> x) const {
  return inverse_survival_at(q, risk_(x));
}

std::vector<double> WeibullCoxModel::parameters() const {
  std::vector<double> out{log_nu_, log_rho_};
  const auto r = risk_.parameters();
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

void WeibullCoxModel::set_parameters(std::span<const double> values) {
  if (values.size() != num_parameters()) throw ShapeError("marginal parameter count mismatch");
  log_nu_ = values[0];
  log_rho_ = values[1];
  risk_.set_parameters(values.subspan(2));
}

StableParams StableParams::from_model(const WeibullCoxModel& model, std::span<const double> x) {
  const double nu = model.nu();
  return {1.0 / nu, model.log_rho(), -model.risk_score(x) / nu};
}

double StableParams::rho() const { return std::exp(mu); }

double StableParams::cumulative_hazard(double t) const {
  if (t == 0.0) return 0.0;
  return std::exp((std::log(t) - mu - f_of_x) / sigma);
}

double StableParams::survival(double t) const { return std::exp(-cumulative_hazard(t)); }

double StableParams::hazard(double t) const {
  require_positive_time(t, "hazard");
  return cumulative_hazard(t) / (t * sigma);
}

double StableParams::density(double t) const { return hazard(t) * survival(t); }

double StableParams::inverse_survival(double q) const {
  if (!(q > 0.0) || q > 1.0) throw DomainError("inverse_survival requires 0 < q <= 1");
  if (q == 1.0) return 0.0;
  return std::exp(mu + f_of_x + sigma * std::log(-std::log(q)));
}

}  // namespace copsurv
