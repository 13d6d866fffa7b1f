#include "copsurv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "copsurv/datagen.hpp"
#include "copsurv/error.hpp"
#include "copsurv/stats.hpp"

namespace copsurv {

void SurvivalL1Config::validate() const {
  if (!(normalizing_quantile > 0.0 && normalizing_quantile < 1.0)) {
    throw ValidationError("survival-l1 normalizing quantile must lie in (0, 1)");
  }
  if (n_steps < 10) throw ValidationError("survival-l1 needs n_steps >= 10");
}

double survival_l1(std::span<const SurvivalCurve> truth, std::span<const SurvivalCurve> estimate,
                   const SurvivalL1Config& cfg) {
  cfg.validate();
  if (truth.size() != estimate.size()) throw ShapeError("survival-l1 curve counts differ");
  if (truth.empty()) throw UndefinedMetric("survival-l1 of an empty curve set");
  std::vector<double> per_record(truth.size());
  const double n = static_cast<double>(cfg.n_steps);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double t_max = truth[i].inverse(cfg.normalizing_quantile);
    if (!std::isfinite(t_max) || !(t_max > 0.0)) {
      throw DomainError("ground-truth curve of record " + std::to_string(i) +
                        " is not invertible at the normalizing quantile");
    }
    double acc = 0.0;
    for (int k = 1; k <= cfg.n_steps; ++k) {
      const double t = static_cast<double>(k) * t_max / n;
      acc += std::abs(truth[i].survival(t) - estimate[i].survival(t));
    }
    // (1 / T_max) * acc * (T_max / n)
    per_record[i] = acc / n;
  }
  return stats::pairwise_sum(per_record) / static_cast<double>(truth.size());
}

double survival_l1(const WeibullCoxModel& truth, const WeibullCoxModel& estimate,
                   const SurvivalDataset& data, const SurvivalL1Config& cfg) {
  cfg.validate();
  if (data.empty()) throw UndefinedMetric("survival-l1 of an empty dataset");
  if (truth.input_dim() != data.dim() || estimate.input_dim() != data.dim()) {
    throw ShapeError("survival-l1 model dimension does not match the dataset");
  }
  std::vector<double> per_record(data.size());
  const double n = static_cast<double>(cfg.n_steps);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.x(i);
    const double g_true = truth.risk_score(x);
    const double g_est = estimate.risk_score(x);
    const double t_max = truth.inverse_survival_at(cfg.normalizing_quantile, g_true);
    if (!std::isfinite(t_max) || !(t_max > 0.0)) {
      throw DomainError("ground-truth curve of record " + std::to_string(i) +
                        " is not invertible at the normalizing quantile");
    }
    double acc = 0.0;
    for (int k = 1; k <= cfg.n_steps; ++k) {
      const double t = static_cast<double>(k) * t_max / n;
      acc += std::abs(std::exp(-truth.cumulative_hazard_at(t, g_true)) -
                      std::exp(-estimate.cumulative_hazard_at(t, g_est)));
    }
    per_record[i] = acc / n;
  }
  return stats::pairwise_sum(per_record) / static_cast<double>(data.size());
}

double concordance_index(std::span<const double> risk, const SurvivalDataset& data) {
  if (risk.size() != data.size()) throw ShapeError("c-index needs one risk score per record");
  // Sort by time; for each event record, count later records (strictly
  // greater time) with lower / equal risk.
  const std::size_t n = data.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.time(a) < data.time(b) || (data.time(a) == data.time(b) && a < b);
  });
  double concordant = 0.0;
  double comparable = 0.0;
  std::size_t later_begin = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t i = order[p];
    if (data.event(i) != 1) continue;
    if (later_begin <= p) later_begin = p + 1;
    while (later_begin < n && data.time(order[later_begin]) <= data.time(i)) ++later_begin;
    for (std::size_t q = later_begin; q < n; ++q) {
      const double rj = risk[order[q]];
      comparable += 1.0;
      if (risk[i] > rj) {
        concordant += 1.0;
      } else if (risk[i] == rj) {
        concordant += 0.5;
      }
    }
  }
  if (comparable == 0.0) throw UndefinedMetric("c-index undefined: no comparable pairs");
  return concordant / comparable;
}

double concordance_index(const WeibullCoxModel& model, const SurvivalDataset& data) {
  std::vector<double> risk(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) risk[i] = model.risk_score(data.x(i));
  return concordance_index(risk, data);
}

double brier_score(std::span<const double> predicted_survival, const SurvivalDataset& data,
                   double eval_time) {
  if (!(eval_time > 0.0)) throw DomainError("brier score needs eval_time > 0");
  if (predicted_survival.size() != data.size()) {
    throw ShapeError("brier score needs one prediction per record");
  }
  std::vector<double> terms;
  terms.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double t = data.time(i);
    double status;
    if (t > eval_time) {
      status = 1.0;
    } else if (data.event(i) == 1) {
      status = 0.0;
    } else {
      continue;
    }
    const double r = status - predicted_survival[i];
    terms.push_back(r * r);
  }
  if (terms.empty()) throw UndefinedMetric("brier score undefined: every record excluded");
  return stats::pairwise_sum(terms) / static_cast<double>(terms.size());
}

double brier_score(const WeibullCoxModel& model, const SurvivalDataset& data, double eval_time) {
  if (!(eval_time > 0.0)) throw DomainError("brier score needs eval_time > 0");
  std::vector<double> s(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) s[i] = model.survival(eval_time, data.x(i));
  return brier_score(s, data, eval_time);
}

double r_squared(std::span<const double> y, std::span<const double> prediction) {
  if (y.size() != prediction.size()) throw ShapeError("r_squared needs one prediction per target");
  if (y.empty()) throw UndefinedMetric("r_squared of an empty sample");
  const double mean = stats::mean(y);
  std::vector<double> sse(y.size()), sst(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    sse[i] = (y[i] - prediction[i]) * (y[i] - prediction[i]);
    sst[i] = (y[i] - mean) * (y[i] - mean);
  }
  const double tot = stats::pairwise_sum(sst);
  if (tot == 0.0) throw UndefinedMetric("r_squared undefined: targets have zero variance");
  return 1.0 - stats::pairwise_sum(sse) / tot;
}

double r_squared(const WeibullCoxModel& model, const RegressionDataset& data) {
  std::vector<double> pred(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) pred[i] = model.inverse_survival(0.5, data.row(i));
  return r_squared(data.y, pred);
}

double MetricBiasRow::c_index_abs_diff() const {
  return std::abs(c_index_censored - c_index_uncensored);
}

double MetricBiasRow::brier_abs_diff() const { return std::abs(brier_censored - brier_uncensored); }

std::vector<MetricBiasRow> metric_bias_experiment(std::span<const double> taus,
                                                  std::uint64_t seed, std::size_t n,
                                                  CopulaFamily family) {
  std::vector<MetricBiasRow> rows;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    SyntheticGenConfig cfg = preset_metric_bias(seed);
    cfg.n = n;
    cfg.copula = copula_from_tau(family, taus[k]);
    cfg.seed = Rng::derive_seed(seed, k);
    const SyntheticData gen = generate_synthetic(cfg);

    std::vector<double> t_event(gen.latent.size());
    for (std::size_t i = 0; i < gen.latent.size(); ++i) t_event[i] = gen.latent[i].t_event;
    const SurvivalDataset uncensored(gen.data.dim(),
                                     {gen.data.covariates().begin(), gen.data.covariates().end()},
                                     t_event, std::vector<int>(t_event.size(), 1));

    MetricBiasRow row;
    row.seed = seed;
    row.tau = taus[k];
    row.eval_time = stats::median(gen.data.times());
    row.censoring_fraction = 1.0 - gen.data.event_fraction();
    row.c_index_uncensored = concordance_index(gen.event_truth, uncensored);
    row.c_index_censored = concordance_index(gen.event_truth, gen.data);
    row.brier_uncensored = brier_score(gen.event_truth, uncensored, row.eval_time);
    row.brier_censored = brier_score(gen.event_truth, gen.data, row.eval_time);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace copsurv
