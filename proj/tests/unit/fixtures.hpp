#pragma once

// Random small instances shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <vector>

#include "copsurv/copula.hpp"
#include "copsurv/dataset.hpp"
#include "copsurv/likelihood.hpp"
#include "copsurv/risk.hpp"
#include "copsurv/rng.hpp"
#include "copsurv/weibull_cox.hpp"
#include "oracles.hpp"

namespace fixtures {

using namespace copsurv;

inline WeibullCoxModel random_margin(Rng& rng, RiskKind kind, std::size_t d) {
  const double nu = 0.8 + 2.0 * rng.uniform();
  const double rho = 0.8 + 2.0 * rng.uniform();
  const std::vector<std::size_t> hidden{4, 3};
  RiskFunction r = RiskFunction::initialized(kind, d, hidden, rng);
  auto p = r.parameters();
  for (double& v : p) v += 0.4 * (rng.uniform() - 0.5);
  r.set_parameters(p);
  return WeibullCoxModel(nu, rho, std::move(r));
}

// Records with both outcomes present and times of order one.
inline SurvivalDataset random_dataset(Rng& rng, std::size_t n, std::size_t d) {
  SurvivalDataset data(d);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : x) v = rng.uniform();
    const double t = 0.2 + 2.5 * rng.uniform();
    data.add(x, t, i % 3 == 0 ? 0 : 1);
  }
  return data;
}

inline std::vector<CopulaSpec> gradient_specs() {
  return {CopulaSpec::independence(), CopulaSpec::clayton(2.0), CopulaSpec::frank(3.0),
          CopulaSpec::mixture(3.0, 1.5, 0.4)};
}

// Largest componentwise relative error between the analytic gradient and
// central differences (step 1e-5 scaled by parameter magnitude).
inline double gradient_max_rel_err(const WeibullCoxModel& ev, const WeibullCoxModel& ce,
                                   const CopulaSpec& spec, const SurvivalDataset& data,
                                   double l2) {
  const ObjectiveValue obj = loglik_gradient(ev, ce, spec, data, l2);
  std::vector<double> params = ev.parameters();
  const auto pc = ce.parameters();
  const auto pk = spec.parameters();
  params.insert(params.end(), pc.begin(), pc.end());
  params.insert(params.end(), pk.begin(), pk.end());
  std::vector<double> analytic = obj.gradient.event;
  analytic.insert(analytic.end(), obj.gradient.censor.begin(), obj.gradient.censor.end());
  analytic.insert(analytic.end(), obj.gradient.copula.begin(), obj.gradient.copula.end());

  const std::size_t ne = ev.num_parameters(), nc = ce.num_parameters();
  auto objective = [&](const std::vector<double>& v) {
    WeibullCoxModel e = ev, c = ce;
    CopulaSpec s = spec;
    e.set_parameters(std::span<const double>(v).subspan(0, ne));
    c.set_parameters(std::span<const double>(v).subspan(ne, nc));
    s.set_parameters(std::span<const double>(v).subspan(ne + nc));
    const double penalty = l2 * (e.risk().weight_norm_squared() + c.risk().weight_norm_squared());
    return loglik_copula(e, c, s, data) - penalty;
  };
  double worst = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double fd = testutil::central_difference(objective, params, k, 1e-5);
    worst = std::max(worst, testutil::rel_err(analytic[k], fd));
  }
  return worst;
}

}  // namespace fixtures
