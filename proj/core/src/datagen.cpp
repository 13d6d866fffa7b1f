#include "copsurv/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "copsurv/error.hpp"
#include "copsurv/rng.hpp"

namespace copsurv {

namespace {

constexpr std::uint64_t kPresetStream = 0xC0FFEEull;

// Keeps inverse_survival finite and strictly positive.
double interior(double u) {
  return std::clamp(u, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

std::vector<double> uniform_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform();
  return v;
}

}  // namespace

void SyntheticGenConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ValidationError("generator config field '" + field + "' " + why);
  };
  if (n == 0) fail("n", "must be >= 1");
  if (d == 0) fail("d", "must be >= 1");
  if (!(nu_event > 0.0) || !std::isfinite(nu_event)) fail("nu_E", "must be > 0");
  if (!(rho_event > 0.0) || !std::isfinite(rho_event)) fail("rho_E", "must be > 0");
  if (!(nu_censor > 0.0) || !std::isfinite(nu_censor)) fail("nu_C", "must be > 0");
  if (!(rho_censor > 0.0) || !std::isfinite(rho_censor)) fail("rho_C", "must be > 0");
  if (risk_event.input_dim() != d) fail("risk_E", "must accept d-vectors");
  if (risk_censor.input_dim() != d) fail("risk_C", "must accept d-vectors");
  try {
    copula.validate();
  } catch (const DomainError& e) {
    fail("copula", e.what());
  }
}

SyntheticData generate_synthetic(const SyntheticGenConfig& cfg) {
  cfg.validate();
  SyntheticData out{SurvivalDataset(cfg.d), cfg.event_truth(), cfg.censor_truth(), cfg.copula, {}};
  out.latent.reserve(cfg.n);
  std::vector<double> x(cfg.d);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    Rng rng(Rng::derive_seed(cfg.seed, i));
    for (double& v : x) v = rng.uniform();
    const double u1 = rng.uniform();
    const double u2 = interior(conditional_sample(cfg.copula, u1, rng));
    const double t_e = out.event_truth.inverse_survival(u1, x);
    const double t_c = out.censor_truth.inverse_survival(u2, x);
    out.latent.push_back({t_e, t_c});
    out.data.add(x, std::min(t_e, t_c), t_e < t_c ? 1 : 0);
  }
  return out;
}

SyntheticGenConfig preset_linear_risk(std::uint64_t seed) {
  Rng rng(Rng::derive_seed(seed, kPresetStream));
  SyntheticGenConfig cfg;
  cfg.preset = "linear_risk";
  cfg.d = 10;
  cfg.nu_event = 4.0;
  cfg.rho_event = 14.0;
  cfg.risk_event = RiskFunction::linear(uniform_vector(rng, 10));
  cfg.nu_censor = 3.0;
  cfg.rho_censor = 16.0;
  cfg.risk_censor = RiskFunction::linear(uniform_vector(rng, 10));
  cfg.seed = seed;
  return cfg;
}

SyntheticGenConfig preset_nonlinear_risk(std::uint64_t seed) {
  Rng rng(Rng::derive_seed(seed, kPresetStream));
  SyntheticGenConfig cfg;
  cfg.preset = "nonlinear_risk";
  cfg.d = 10;
  cfg.nu_event = 4.0;
  cfg.rho_event = 17.0;
  cfg.risk_event = RiskFunction::quadratic(std::vector<double>(10, 1.0 / 8.0));
  cfg.nu_censor = 3.0;
  cfg.rho_censor = 16.0;
  auto beta = uniform_vector(rng, 10);
  for (double& b : beta) b /= 5.0;
  cfg.risk_censor = RiskFunction::quadratic(std::move(beta));
  cfg.seed = seed;
  return cfg;
}

SyntheticGenConfig preset_metric_bias(std::uint64_t seed) {
  Rng rng(Rng::derive_seed(seed, kPresetStream));
  SyntheticGenConfig cfg;
  cfg.preset = "metric_bias";
  cfg.n = 10000;
  cfg.d = 10;
  cfg.nu_event = 4.0;
  cfg.rho_event = 17.0;
  std::vector<double> ce(10, 0.0);
  ce[0] = ce[1] = 1.0;
  cfg.risk_event = RiskFunction::quadratic(std::move(ce));
  cfg.nu_censor = 3.0;
  cfg.rho_censor = 16.0;
  const auto beta = uniform_vector(rng, 10);
  std::vector<double> cc(10, 0.0);
  std::copy_n(beta.begin(), 3, cc.begin());
  cfg.risk_censor = RiskFunction::quadratic(std::move(cc));
  cfg.seed = seed;
  return cfg;
}

SyntheticGenConfig preset_by_name(const std::string& name, std::uint64_t seed) {
  if (name == "linear_risk") return preset_linear_risk(seed);
  if (name == "nonlinear_risk") return preset_nonlinear_risk(seed);
  if (name == "metric_bias") return preset_metric_bias(seed);
  throw ValidationError("unknown preset '" + name +
                        "' (expected linear_risk, nonlinear_risk or metric_bias)");
}

CensoredRegression censor_regression(RegressionDataset data, const CopulaSpec& spec,
                                     std::uint64_t seed, const CensorOptions& options) {
  spec.validate();
  if (data.size() < 3) throw ValidationError("regression data needs at least three records");
  CensoredRegression out{SurvivalDataset(data.dim),
                         WeibullCoxModel(1.0, 1.0, RiskFunction::linear(std::vector<double>(data.dim))),
                         WeibullCoxModel(1.0, 1.0, RiskFunction::linear(std::vector<double>(data.dim))),
                         {}, {}, 0.0, 0.0};
  bool has_zero = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.y[i] < 0.0) {
      throw ValidationError("target at record " + std::to_string(i) +
                            " is negative; survival times must be positive");
    }
    has_zero = has_zero || data.y[i] == 0.0;
  }
  if (has_zero) {
    if (!options.shift_zeros) {
      throw ValidationError("targets contain zeros; survival times must be positive "
                            "(enable the zero shift to add 1e-3 * max(y))");
    }
    out.shift = 1e-3 * *std::max_element(data.y.begin(), data.y.end());
    for (double& y : data.y) y += out.shift;
  }
  out.standardization = standardize(data);

  std::vector<int> all_events(data.size(), 1);
  const SurvivalDataset uncensored(data.dim, data.x, data.y, all_events);
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  TrainConfig fit_cfg = options.fit;
  fit_cfg.seed = Rng::derive_seed(seed, 1);
  Rng split_rng(Rng::derive_seed(seed, 2));
  split_rng.shuffle(std::span<std::size_t>(idx));
  const auto n_val = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(fit_cfg.validation_fraction *
                                            static_cast<double>(data.size()))),
      1, data.size() - 1);
  const std::vector<std::size_t> val_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
  const std::vector<std::size_t> train_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  const FittedMarginal fitted = fit_marginal(uncensored.subset(train_idx), uncensored.subset(val_idx),
                                             RiskKind::Linear, fit_cfg, 1);
  out.event_model = fitted.model;
  out.censor_model = WeibullCoxModel(fitted.model.nu() / 0.6, fitted.model.rho(),
                                     fitted.model.risk());

  for (std::size_t i = 0; i < data.size(); ++i) {
    Rng rng(Rng::derive_seed(Rng::derive_seed(seed, 3), i));
    const auto x = data.row(i);
    const double y = data.y[i];
    const double u1 = interior(out.event_model.survival(y, x));
    const double u2 = interior(conditional_sample(spec, u1, rng));
    const double t_c = out.censor_model.inverse_survival(u2, x);
    const Observation obs = observe_regression(y, t_c);
    out.data.add(x, obs.time, obs.event);
    out.censor_times.push_back(t_c);
  }
  out.y = std::move(data.y);
  out.censoring_fraction = 1.0 - out.data.event_fraction();
  return out;
}

RegressionDataset synthetic_regression(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw ValidationError("synthetic regression needs n, d >= 1");
  Rng rng(seed);
  std::vector<double> beta(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    beta[k] = sign * (1.0 - 0.6 * static_cast<double>(k) / static_cast<double>(d));
  }
  const WeibullCoxModel truth(2.0, 10.0, RiskFunction::linear(beta));
  RegressionDataset data;
  data.dim = d;
  for (std::size_t k = 0; k < d; ++k) data.feature_names.push_back("f" + std::to_string(k));
  std::vector<double> x(d);
  const double half_width = std::sqrt(3.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : x) v = half_width * (2.0 * rng.uniform() - 1.0);
    data.x.insert(data.x.end(), x.begin(), x.end());
    data.y.push_back(truth.inverse_survival(rng.uniform(), x));
  }
  return data;
}

}  // namespace copsurv
