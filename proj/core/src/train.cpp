#include "copsurv/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "copsurv/likelihood.hpp"
#include "copsurv/rng.hpp"

namespace copsurv {

namespace {

class Adam {
 public:
  Adam(std::size_t n, double lr) : lr_(lr), m_(n, 0.0), v_(n, 0.0) {}

  // Minimizing step on `params` for loss gradient `grad`.
  void step(std::vector<double>& params, const std::vector<double>& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    for (std::size_t k = 0; k < params.size(); ++k) {
      m_[k] = kBeta1 * m_[k] + (1.0 - kBeta1) * grad[k];
      v_[k] = kBeta2 * v_[k] + (1.0 - kBeta2) * grad[k] * grad[k];
      params[k] -= lr_ * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + kEps);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  double lr_;
  int t_ = 0;
  std::vector<double> m_, v_;
};

// Loss gradient of mean negative loglik + lambda |w|^2 from the loglik gradient.
std::vector<double> loss_gradient(const std::vector<double>& loglik_grad, double n,
                                  const WeibullCoxModel& m, double lambda) {
  std::vector<double> g(loglik_grad.size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = -loglik_grad[k] / n;
  if (lambda != 0.0) {
    const auto w = m.risk().weights();
    for (std::size_t k = 0; k < w.size(); ++k) g[2 + k] += 2.0 * lambda * w[k];
  }
  return g;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

CopulaSpec initial_copula(CopulaFamily family, const TrainConfig& config) {
  switch (family) {
    case CopulaFamily::Independence: return CopulaSpec::independence();
    case CopulaFamily::Clayton: return CopulaSpec::clayton(config.theta_init);
    case CopulaFamily::Frank: return CopulaSpec::frank(config.theta_init);
    case CopulaFamily::Mixture:
      return CopulaSpec::mixture(config.theta_init, config.theta_init, config.kappa_init);
  }
  return {};
}

void project_copula(CopulaSpec& spec, const TrainConfig& config) {
  switch (spec.family) {
    case CopulaFamily::Independence: return;
    case CopulaFamily::Clayton: spec.theta = std::max(spec.theta, config.theta_min); return;
    case CopulaFamily::Frank:
      spec.theta = std::clamp(spec.theta, config.theta_min, kFrankThetaMax);
      return;
    case CopulaFamily::Mixture:
      spec.theta_frank = std::clamp(spec.theta_frank, config.theta_min, kFrankThetaMax);
      spec.theta_clayton = std::max(spec.theta_clayton, config.theta_min);
      spec.kappa = std::clamp(spec.kappa, 0.0, 1.0);
      return;
  }
}

void require_trainable(const SurvivalDataset& train, const SurvivalDataset& validation,
                       bool need_censoring) {
  if (train.empty()) throw ValidationError("training data is empty");
  if (validation.empty()) throw ValidationError("validation data is empty");
  if (train.dim() != validation.dim()) {
    throw ShapeError("training and validation covariate dimensions differ");
  }
  const std::size_t events = train.num_events();
  if (events == 0) throw ValidationError("training data contains no events");
  if (need_censoring && events == train.size()) {
    throw ValidationError("training data contains no censored records");
  }
}

}  // namespace

double TrainConfig::l2_for(RiskKind kind) const {
  if (l2_lambda) return *l2_lambda;
  return kind == RiskKind::Mlp ? 1e-3 : 0.0;
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ValidationError("train config field '" + field + "' " + why);
  };
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate", "must be > 0");
  if (max_epochs < 1) fail("max_epochs", "must be >= 1");
  if (!(grad_scale > 0.0) || !std::isfinite(grad_scale)) fail("grad_scale", "must be > 0");
  if (!(clip_bound > 0.0) || !std::isfinite(clip_bound)) fail("clip_bound", "must be > 0");
  if (!(theta_min > 0.0) || !std::isfinite(theta_min)) fail("theta_min", "must be > 0");
  if (l2_lambda && !(*l2_lambda >= 0.0 && std::isfinite(*l2_lambda))) {
    fail("l2_lambda", "must be >= 0");
  }
  if (patience < 1) fail("patience", "must be >= 1");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    fail("validation_fraction", "must lie in (0, 1)");
  }
  if (std::any_of(hidden.begin(), hidden.end(), [](std::size_t w) { return w == 0; })) {
    fail("hidden", "widths must be positive");
  }
  if (!(theta_init > 0.0) || !std::isfinite(theta_init)) fail("theta_init", "must be > 0");
  if (!(kappa_init >= 0.0 && kappa_init <= 1.0)) fail("kappa_init", "must lie in [0, 1]");
}

WeibullCoxModel initial_marginal(const SurvivalDataset& train, RiskKind kind,
                                 const TrainConfig& config, std::uint64_t stream) {
  Rng rng(Rng::derive_seed(config.seed, stream));
  double total = 0.0;
  for (double t : train.times()) total += t;
  const double mean_t = total / static_cast<double>(train.size());
  return WeibullCoxModel(1.0, mean_t,
                         RiskFunction::initialized(kind, train.dim(), config.hidden, rng));
}

FittedJointModel fit(const SurvivalDataset& train, const SurvivalDataset& validation,
                     RiskKind event_kind, RiskKind censor_kind, CopulaFamily family,
                     const TrainConfig& config) {
  config.validate();
  require_trainable(train, validation, true);

  FittedJointModel state{initial_marginal(train, event_kind, config, 1),
                         initial_marginal(train, censor_kind, config, 2),
                         initial_copula(family, config), {}, 0, 0.0};
  const double n_train = static_cast<double>(train.size());
  const double n_val = static_cast<double>(validation.size());
  const double lambda_e = config.l2_for(event_kind);
  const double lambda_c = config.l2_for(censor_kind);

  std::vector<double> pe = state.event_model.parameters();
  std::vector<double> pc = state.censor_model.parameters();
  std::vector<double> pk = state.copula.parameters();
  Adam adam_e(pe.size(), config.learning_rate);
  Adam adam_c(pc.size(), config.learning_rate);
  Adam adam_k(pk.size(), config.learning_rate);

  FittedJointModel best = state;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<TraceRow> trace;

  for (int epoch = 0;; ++epoch) {
    ObjectiveValue obj;
    double val_loss;
    try {
      obj = loglik_gradient(state.event_model, state.censor_model, state.copula, train, 0.0);
      val_loss = -loglik_copula(state.event_model, state.censor_model, state.copula, validation) /
                 n_val;
    } catch (const NumericalFailure& e) {
      FittedJointModel last = state;
      last.trace = trace;
      throw TrainingFailure(std::string("training failed at epoch ") + std::to_string(epoch) +
                                ": " + e.what(),
                            epoch, std::move(last));
    }
    trace.push_back({epoch, -obj.value / n_train, val_loss, state.copula.parameters()});
    if (val_loss < best_val) {
      best_val = val_loss;
      best = state;
      best.best_epoch = epoch;
    }
    if (epoch >= config.max_epochs || epoch - best.best_epoch >= config.patience) break;

    const auto ge = loss_gradient(obj.gradient.event, n_train, state.event_model, lambda_e);
    const auto gc = loss_gradient(obj.gradient.censor, n_train, state.censor_model, lambda_c);
    adam_c.step(pc, gc);
    adam_e.step(pe, ge);
    if (!pk.empty()) {
      std::vector<double> gk(pk.size());
      for (std::size_t k = 0; k < pk.size(); ++k) {
        gk[k] = std::clamp(-obj.gradient.copula[k] / n_train * config.grad_scale,
                           -config.clip_bound, config.clip_bound);
      }
      const double kappa_before = family == CopulaFamily::Mixture ? pk[2] : 0.0;
      adam_k.step(pk, gk);
      if (family == CopulaFamily::Mixture && !config.learn_kappa) pk[2] = kappa_before;
    }
    if (!all_finite(pe) || !all_finite(pc) || !all_finite(pk)) {
      FittedJointModel last = state;
      last.trace = trace;
      throw TrainingFailure("non-finite parameter after update at epoch " +
                                std::to_string(epoch + 1),
                            epoch + 1, std::move(last));
    }
    state.event_model.set_parameters(pe);
    state.censor_model.set_parameters(pc);
    state.copula.set_parameters(pk);
    project_copula(state.copula, config);
    pk = state.copula.parameters();
  }

  FittedJointModel out = config.restore_best ? best : state;
  if (!config.restore_best) out.best_epoch = best.best_epoch;
  out.best_val_negloglik = best_val;
  out.trace = std::move(trace);
  return out;
}

FittedJointModel fit(const SurvivalDataset& data, RiskKind event_kind, RiskKind censor_kind,
                     CopulaFamily family, const TrainConfig& config) {
  config.validate();
  if (data.size() < 2) throw ValidationError("need at least two records to split");
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(Rng::derive_seed(config.seed, 3));
  rng.shuffle(std::span<std::size_t>(idx));
  auto n_val = static_cast<std::size_t>(
      std::llround(config.validation_fraction * static_cast<double>(data.size())));
  n_val = std::clamp<std::size_t>(n_val, 1, data.size() - 1);
  std::vector<std::size_t> val_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  return fit(data.subset(train_idx), data.subset(val_idx), event_kind, censor_kind, family, config);
}

FittedMarginal fit_marginal(const SurvivalDataset& train, const SurvivalDataset& validation,
                            RiskKind kind, const TrainConfig& config, std::uint64_t stream) {
  config.validate();
  require_trainable(train, validation, false);
  WeibullCoxModel model = initial_marginal(train, kind, config, stream);
  const double n_train = static_cast<double>(train.size());
  const double n_val = static_cast<double>(validation.size());
  const double lambda = config.l2_for(kind);
  std::vector<double> p = model.parameters();
  Adam adam(p.size(), config.learning_rate);

  FittedMarginal best{model, {}, 0, std::numeric_limits<double>::infinity()};
  std::vector<TraceRow> trace;
  for (int epoch = 0;; ++epoch) {
    const ObjectiveValue obj = loglik_marginal_gradient(model, train, 0.0);
    const double val_loss = -loglik_marginal(model, validation) / n_val;
    trace.push_back({epoch, -obj.value / n_train, val_loss, {}});
    if (val_loss < best.best_val_negloglik) {
      best.model = model;
      best.best_epoch = epoch;
      best.best_val_negloglik = val_loss;
    }
    if (epoch >= config.max_epochs || epoch - best.best_epoch >= config.patience) break;
    adam.step(p, loss_gradient(obj.gradient.event, n_train, model, lambda));
    if (!all_finite(p)) {
      throw NumericalFailure("non-finite parameter after update at epoch " +
                             std::to_string(epoch + 1));
    }
    model.set_parameters(p);
  }
  if (!config.restore_best) best.model = model;
  best.trace = std::move(trace);
  return best;
}

SurvivalDataset flip_events(const SurvivalDataset& data) {
  std::vector<int> flipped(data.events().begin(), data.events().end());
  for (int& e : flipped) e = 1 - e;
  return SurvivalDataset(data.dim(), {data.covariates().begin(), data.covariates().end()},
                         {data.times().begin(), data.times().end()}, std::move(flipped));
}

std::string trace_csv(const std::vector<TraceRow>& trace, CopulaFamily family) {
  std::string out = "epoch,train_negloglik,val_negloglik";
  if (family == CopulaFamily::Clayton || family == CopulaFamily::Frank) out += ",theta_hat";
  if (family == CopulaFamily::Mixture) out += ",theta_frank,theta_clayton,kappa";
  out += '\n';
  for (const auto& row : trace) {
    out += std::to_string(row.epoch) + "," + format_double(row.train_negloglik) + "," +
           format_double(row.val_negloglik);
    for (double p : row.copula_params) out += "," + format_double(p);
    out += '\n';
  }
  return out;
}

}  // namespace copsurv
