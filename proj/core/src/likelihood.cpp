#include "copsurv/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "copsurv/error.hpp"

namespace copsurv {

namespace {

// exp(-690) is about 1e-300, the survival floor.
constexpr double kLogSurvivalFloor = -690.7755278982137;
constexpr std::size_t kChunk = 256;

struct Margin {
  double a;       // nu (log t - log rho) + g
  double h;       // cumulative hazard e^a
  double log_u;   // log survival, floored
  bool floored;
  double z;       // log t - log rho
};

Margin evaluate_margin(const WeibullCoxModel& m, double log_t, double g) {
  Margin out;
  out.z = log_t - m.log_rho();
  out.a = m.nu() * out.z + g;
  out.h = std::exp(out.a);
  out.floored = -out.h < kLogSurvivalFloor;
  out.log_u = out.floored ? kLogSurvivalFloor : -out.h;
  return out;
}

void check_dims(const WeibullCoxModel& e, const WeibullCoxModel& c, const SurvivalDataset& data) {
  if (e.input_dim() != data.dim() || c.input_dim() != data.dim()) {
    throw ShapeError("model input dimension does not match dataset dimension " +
                     std::to_string(data.dim()));
  }
}

// Adds b into a elementwise.
void add_into(std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
}

struct ChunkSum {
  double value = 0.0;
  JointGradient grad;
};

// Fixed-shape pairwise reduction of per-chunk sums.
ChunkSum reduce(std::vector<ChunkSum>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return std::move(parts[lo]);
  const std::size_t mid = lo + (hi - lo) / 2;
  ChunkSum left = reduce(parts, lo, mid);
  ChunkSum right = reduce(parts, mid, hi);
  left.value += right.value;
  add_into(left.grad.event, right.grad.event);
  add_into(left.grad.censor, right.grad.censor);
  add_into(left.grad.copula, right.grad.copula);
  return left;
}

template <bool WithGradient>
ChunkSum joint_chunk(const WeibullCoxModel& em, const WeibullCoxModel& cm, const CopulaSpec& spec,
                     const SurvivalDataset& data, std::size_t begin, std::size_t end) {
  ChunkSum out;
  if constexpr (WithGradient) {
    out.grad.event.assign(em.num_parameters(), 0.0);
    out.grad.censor.assign(cm.num_parameters(), 0.0);
    out.grad.copula.assign(spec.num_parameters(), 0.0);
  }
  RiskWorkspace ws_e, ws_c;
  const double nu_e = em.nu(), nu_c = cm.nu();
  const bool independent = spec.family == CopulaFamily::Independence;
  for (std::size_t i = begin; i < end; ++i) {
    const auto x = data.x(i);
    const double t = data.time(i);
    const double log_t = std::log(t);
    const double g_e = em.risk().forward(x, ws_e);
    const double g_c = cm.risk().forward(x, ws_c);
    const Margin me = evaluate_margin(em, log_t, g_e);
    const Margin mc = evaluate_margin(cm, log_t, g_c);
    const bool is_event = data.event(i) == 1;

    double term;
    double d_ae, d_ac;  // d term / d a for each margin
    if (independent) {
      // log dC/du1 = log u2, log dC/du2 = log u1.
      if (is_event) {
        term = em.log_nu() - log_t + me.a - me.h + mc.log_u;
        d_ae = 1.0 - me.h;
        d_ac = mc.floored ? 0.0 : -mc.h;
      } else {
        term = cm.log_nu() - log_t + mc.a - mc.h + me.log_u;
        d_ac = 1.0 - mc.h;
        d_ae = me.floored ? 0.0 : -me.h;
      }
    } else {
      const LogPartial lp = is_event ? log_partial_u1(spec, me.log_u, mc.log_u)
                                     : log_partial_u2(spec, me.log_u, mc.log_u);
      const double de = me.floored ? 0.0 : -me.h * lp.d_log_u1;
      const double dc = mc.floored ? 0.0 : -mc.h * lp.d_log_u2;
      if (is_event) {
        term = em.log_nu() - log_t + me.a - me.h + lp.value;
        d_ae = 1.0 - me.h + de;
        d_ac = dc;
      } else {
        term = cm.log_nu() - log_t + mc.a - mc.h + lp.value;
        d_ac = 1.0 - mc.h + dc;
        d_ae = de;
      }
      if constexpr (WithGradient) {
        for (std::size_t k = 0; k < out.grad.copula.size(); ++k) out.grad.copula[k] += lp.d_params[k];
      }
    }
    if (!std::isfinite(term)) {
      throw NumericalFailure("non-finite log-likelihood at record " + std::to_string(i), i);
    }
    out.value += term;
    if constexpr (WithGradient) {
      auto& ge = out.grad.event;
      ge[0] += (is_event ? 1.0 : 0.0) + d_ae * nu_e * me.z;
      ge[1] += -nu_e * d_ae;
      em.risk().accumulate_gradient(x, ws_e, d_ae, std::span<double>(ge).subspan(2));
      auto& gc = out.grad.censor;
      gc[0] += (is_event ? 0.0 : 1.0) + d_ac * nu_c * mc.z;
      gc[1] += -nu_c * d_ac;
      cm.risk().accumulate_gradient(x, ws_c, d_ac, std::span<double>(gc).subspan(2));
    }
  }
  return out;
}

template <bool WithGradient>
ChunkSum joint_sum(const WeibullCoxModel& em, const WeibullCoxModel& cm, const CopulaSpec& spec,
                   const SurvivalDataset& data) {
  check_dims(em, cm, data);
  if (data.empty()) {
    ChunkSum empty;
    if constexpr (WithGradient) {
      empty.grad.event.assign(em.num_parameters(), 0.0);
      empty.grad.censor.assign(cm.num_parameters(), 0.0);
      empty.grad.copula.assign(spec.num_parameters(), 0.0);
    }
    return empty;
  }
  std::vector<ChunkSum> parts;
  for (std::size_t begin = 0; begin < data.size(); begin += kChunk) {
    parts.push_back(joint_chunk<WithGradient>(em, cm, spec, data, begin,
                                              std::min(begin + kChunk, data.size())));
  }
  return reduce(parts, 0, parts.size());
}

void add_l2(const WeibullCoxModel& m, double lambda, double& value, std::vector<double>& grad) {
  if (lambda == 0.0) return;
  value -= lambda * m.risk().weight_norm_squared();
  const auto w = m.risk().weights();
  for (std::size_t k = 0; k < w.size(); ++k) grad[2 + k] -= 2.0 * lambda * w[k];
}

void check_gradient(const std::vector<double>& g, const char* what) {
  for (double v : g) {
    if (!std::isfinite(v)) throw NumericalFailure(std::string("non-finite gradient for ") + what);
  }
}

// A single margin is the joint Independence likelihood with an
// exponential(1) partner whose terms are dropped.
template <bool WithGradient>
ChunkSum marginal_chunk(const WeibullCoxModel& m, const SurvivalDataset& data, std::size_t begin,
                        std::size_t end) {
  ChunkSum out;
  if constexpr (WithGradient) out.grad.event.assign(m.num_parameters(), 0.0);
  RiskWorkspace ws;
  const double nu = m.nu();
  for (std::size_t i = begin; i < end; ++i) {
    const auto x = data.x(i);
    const double log_t = std::log(data.time(i));
    const Margin mm = evaluate_margin(m, log_t, m.risk().forward(x, ws));
    const bool is_event = data.event(i) == 1;
    double term, d_a;
    if (is_event) {
      term = m.log_nu() - log_t + mm.a - mm.h;
      d_a = 1.0 - mm.h;
    } else {
      term = mm.log_u;
      d_a = mm.floored ? 0.0 : -mm.h;
    }
    if (!std::isfinite(term)) {
      throw NumericalFailure("non-finite log-likelihood at record " + std::to_string(i), i);
    }
    out.value += term;
    if constexpr (WithGradient) {
      auto& g = out.grad.event;
      g[0] += (is_event ? 1.0 : 0.0) + d_a * nu * mm.z;
      g[1] += -nu * d_a;
      m.risk().accumulate_gradient(x, ws, d_a, std::span<double>(g).subspan(2));
    }
  }
  return out;
}

template <bool WithGradient>
ChunkSum marginal_sum(const WeibullCoxModel& m, const SurvivalDataset& data) {
  if (m.input_dim() != data.dim()) throw ShapeError("model input dimension mismatch");
  if (data.empty()) {
    ChunkSum empty;
    if constexpr (WithGradient) empty.grad.event.assign(m.num_parameters(), 0.0);
    return empty;
  }
  std::vector<ChunkSum> parts;
  for (std::size_t begin = 0; begin < data.size(); begin += kChunk) {
    parts.push_back(marginal_chunk<WithGradient>(m, data, begin, std::min(begin + kChunk, data.size())));
  }
  return reduce(parts, 0, parts.size());
}

}  // namespace

double loglik_independent(const WeibullCoxModel& event_model, const WeibullCoxModel& censor_model,
                          const SurvivalDataset& data) {
  return joint_sum<false>(event_model, censor_model, CopulaSpec::independence(), data).value;
}

double loglik_copula(const WeibullCoxModel& event_model, const WeibullCoxModel& censor_model,
                     const CopulaSpec& spec, const SurvivalDataset& data) {
  spec.validate();
  return joint_sum<false>(event_model, censor_model, spec, data).value;
}

ObjectiveValue loglik_gradient(const WeibullCoxModel& event_model,
                               const WeibullCoxModel& censor_model, const CopulaSpec& spec,
                               const SurvivalDataset& data, double l2_lambda) {
  spec.validate();
  ChunkSum s = joint_sum<true>(event_model, censor_model, spec, data);
  ObjectiveValue out{s.value, std::move(s.grad)};
  add_l2(event_model, l2_lambda, out.value, out.gradient.event);
  add_l2(censor_model, l2_lambda, out.value, out.gradient.censor);
  check_gradient(out.gradient.event, "event model");
  check_gradient(out.gradient.censor, "censor model");
  check_gradient(out.gradient.copula, "copula");
  return out;
}

ObjectiveValue loglik_marginal_gradient(const WeibullCoxModel& model, const SurvivalDataset& data,
                                        double l2_lambda) {
  ChunkSum s = marginal_sum<true>(model, data);
  ObjectiveValue out{s.value, std::move(s.grad)};
  add_l2(model, l2_lambda, out.value, out.gradient.event);
  check_gradient(out.gradient.event, "marginal model");
  return out;
}

double loglik_marginal(const WeibullCoxModel& model, const SurvivalDataset& data) {
  return marginal_sum<false>(model, data).value;
}

}  // namespace copsurv
