#pragma once

#include <vector>

#include "copsurv/copula.hpp"
#include "copsurv/dataset.hpp"
#include "copsurv/weibull_cox.hpp"

namespace copsurv {

// Sum over records of
//   delta [log f_E + log S_C] + (1 - delta) [log f_C + log S_E].
double loglik_independent(const WeibullCoxModel& event_model, const WeibullCoxModel& censor_model,
                          const SurvivalDataset& data);

// Sum over records of
//   delta [log f_E + log dC/du1] + (1 - delta) [log f_C + log dC/du2]
// with u1 = S_E(t | x), u2 = S_C(t | x).
double loglik_copula(const WeibullCoxModel& event_model, const WeibullCoxModel& censor_model,
                     const CopulaSpec& spec, const SurvivalDataset& data);

// Gradients laid out like the parameters() of each component.
struct JointGradient {
  std::vector<double> event;
  std::vector<double> censor;
  std::vector<double> copula;  // empty for Independence
};

struct ObjectiveValue {
  double value = 0.0;  // loglik - l2_lambda * (|w_E|^2 + |w_C|^2)
  JointGradient gradient;
};

ObjectiveValue loglik_gradient(const WeibullCoxModel& event_model,
                               const WeibullCoxModel& censor_model, const CopulaSpec& spec,
                               const SurvivalDataset& data, double l2_lambda = 0.0);

// Single-margin likelihood sum delta log f + (1 - delta) log S and its gradient.
ObjectiveValue loglik_marginal_gradient(const WeibullCoxModel& model, const SurvivalDataset& data,
                                        double l2_lambda = 0.0);
double loglik_marginal(const WeibullCoxModel& model, const SurvivalDataset& data);

}  // namespace copsurv
