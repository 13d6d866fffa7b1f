#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "copsurv/copula.hpp"
#include "copsurv/dataset.hpp"
#include "copsurv/error.hpp"
#include "copsurv/weibull_cox.hpp"

namespace copsurv {

struct TrainConfig {
  double learning_rate = 1e-3;
  int max_epochs = 10000;
  double grad_scale = 1000.0;  // multiplies the copula gradient before clipping
  double clip_bound = 0.1;
  double theta_min = 1e-3;
  // Unset: 0 for linear risk, 1e-3 for MLP risk.
  std::optional<double> l2_lambda;
  int patience = 3000;
  double validation_fraction = 0.2;
  std::uint64_t seed = 0;
  std::vector<std::size_t> hidden{4, 4, 4, 2};
  double theta_init = 1.0;
  double kappa_init = 0.5;
  bool learn_kappa = true;
  // Return the best-validation parameters instead of the final ones.
  bool restore_best = true;

  double l2_for(RiskKind kind) const;
  // Throws ValidationError naming the offending field.
  void validate() const;

  bool operator==(const TrainConfig&) const = default;
};

struct TraceRow {
  int epoch = 0;
  double train_negloglik = 0.0;  // mean per record, without the l2 penalty
  double val_negloglik = 0.0;
  std::vector<double> copula_params;
  bool operator==(const TraceRow&) const = default;
};

struct FittedJointModel {
  WeibullCoxModel event_model;
  WeibullCoxModel censor_model;
  CopulaSpec copula;
  std::vector<TraceRow> trace;
  int best_epoch = 0;
  double best_val_negloglik = 0.0;

  bool operator==(const FittedJointModel&) const = default;
};

struct FittedMarginal {
  WeibullCoxModel model;
  std::vector<TraceRow> trace;
  int best_epoch = 0;
  double best_val_negloglik = 0.0;
};

// Numerical failure during optimization, with the last finite state.
class TrainingFailure : public NumericalFailure {
 public:
  TrainingFailure(const std::string& what, int epoch, FittedJointModel last_state)
      : NumericalFailure(what), epoch_(epoch), state_(std::move(last_state)) {}

  int epoch() const { return epoch_; }
  const FittedJointModel& last_state() const { return state_; }

 private:
  int epoch_;
  FittedJointModel state_;
};

// Full-batch Adam on the joint copula likelihood. Trace row e holds the
// state after e updates; training stops after `patience` epochs without a
// validation improvement or at max_epochs.
FittedJointModel fit(const SurvivalDataset& train, const SurvivalDataset& validation,
                     RiskKind event_kind, RiskKind censor_kind, CopulaFamily family,
                     const TrainConfig& config);
// Holds out validation_fraction of `data` (seeded shuffle) for early stopping.
FittedJointModel fit(const SurvivalDataset& data, RiskKind event_kind, RiskKind censor_kind,
                     CopulaFamily family, const TrainConfig& config);

// Single Weibull-Cox model on delta log f + (1 - delta) log S. With the
// event stream (1) this reproduces the event half of an Independence fit;
// stream 2 with flipped indicators reproduces the censor half.
FittedMarginal fit_marginal(const SurvivalDataset& train, const SurvivalDataset& validation,
                            RiskKind kind, const TrainConfig& config, std::uint64_t stream = 1);

// Returns the same records with event indicators flipped.
SurvivalDataset flip_events(const SurvivalDataset& data);

// Initial marginal: nu = 1, rho = mean observed time, fan-in uniform risk.
WeibullCoxModel initial_marginal(const SurvivalDataset& train, RiskKind kind,
                                 const TrainConfig& config, std::uint64_t stream);

// CSV: epoch,train_negloglik,val_negloglik[,theta_hat | ,theta_frank,theta_clayton,kappa]
std::string trace_csv(const std::vector<TraceRow>& trace, CopulaFamily family);

}  // namespace copsurv
