#include "copsurv/risk.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "copsurv/error.hpp"

namespace copsurv {

std::string_view to_string(RiskKind kind) {
  switch (kind) {
    case RiskKind::Linear: return "linear";
    case RiskKind::Mlp: return "mlp";
    case RiskKind::Quadratic: return "quadratic";
  }
  return "unknown";
}

RiskKind parse_risk_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "linear") return RiskKind::Linear;
  if (lower == "mlp") return RiskKind::Mlp;
  if (lower == "quadratic") return RiskKind::Quadratic;
  throw ValidationError("unknown risk kind '" + std::string(name) + "'");
}

double elu(double x) { return x > 0.0 ? x : std::expm1(x); }

RiskFunction::RiskFunction(RiskKind kind, std::vector<std::size_t> widths,
                           std::vector<double> weights, std::vector<double> biases)
    : kind_(kind), widths_(std::move(widths)), weights_(std::move(weights)),
      biases_(std::move(biases)) {
  if (widths_.size() < 2 || widths_.back() != 1) {
    throw ShapeError("risk function widths must end in a single output");
  }
  if (std::any_of(widths_.begin(), widths_.end(), [](std::size_t w) { return w == 0; })) {
    throw ShapeError("risk function widths must be positive");
  }
  std::size_t n_w = 0, n_b = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    n_w += widths_[l] * widths_[l + 1];
    n_b += widths_[l + 1];
  }
  if (kind_ != RiskKind::Mlp) {
    if (widths_.size() != 2) throw ShapeError("linear/quadratic risk has a single layer");
    n_b = 0;
  }
  if (weights_.size() != n_w || biases_.size() != n_b) {
    throw ShapeError("risk function parameter count does not match widths");
  }
}

RiskFunction RiskFunction::linear(std::vector<double> beta) {
  const std::size_t d = beta.size();
  return RiskFunction(RiskKind::Linear, {d, 1}, std::move(beta), {});
}

RiskFunction RiskFunction::quadratic(std::vector<double> coefficients) {
  const std::size_t d = coefficients.size();
  return RiskFunction(RiskKind::Quadratic, {d, 1}, std::move(coefficients), {});
}

RiskFunction RiskFunction::mlp(std::vector<std::size_t> widths) {
  std::size_t n_w = 0, n_b = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    n_w += widths[l] * widths[l + 1];
    n_b += widths[l + 1];
  }
  return RiskFunction(RiskKind::Mlp, std::move(widths), std::vector<double>(n_w, 0.0),
                      std::vector<double>(n_b, 0.0));
}

RiskFunction RiskFunction::mlp(std::vector<std::size_t> widths, Rng& rng) {
  RiskFunction f = mlp(std::move(widths));
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < f.widths_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(f.widths_[l]));
    const std::size_t count = f.widths_[l] * f.widths_[l + 1];
    for (std::size_t k = 0; k < count; ++k) {
      f.weights_[offset + k] = bound * (2.0 * rng.uniform() - 1.0);
    }
    offset += count;
  }
  return f;
}

RiskFunction RiskFunction::initialized(RiskKind kind, std::size_t dim,
                                       std::span<const std::size_t> hidden, Rng& rng) {
  if (dim == 0) throw ShapeError("covariate dimension must be positive");
  if (kind == RiskKind::Mlp) {
    std::vector<std::size_t> widths{dim};
    widths.insert(widths.end(), hidden.begin(), hidden.end());
    widths.push_back(1);
    return mlp(std::move(widths), rng);
  }
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<double> w(dim);
  for (double& v : w) v = bound * (2.0 * rng.uniform() - 1.0);
  return kind == RiskKind::Linear ? linear(std::move(w)) : quadratic(std::move(w));
}

RiskFunction RiskFunction::from_parts(RiskKind kind, std::vector<std::size_t> widths,
                                      std::vector<double> weights, std::vector<double> biases) {
  return RiskFunction(kind, std::move(widths), std::move(weights), std::move(biases));
}

std::vector<double> RiskFunction::parameters() const {
  std::vector<double> out(weights_);
  out.insert(out.end(), biases_.begin(), biases_.end());
  return out;
}

void RiskFunction::set_parameters(std::span<const double> values) {
  if (values.size() != num_parameters()) throw ShapeError("risk parameter count mismatch");
  std::copy_n(values.begin(), weights_.size(), weights_.begin());
  std::copy(values.begin() + static_cast<std::ptrdiff_t>(weights_.size()), values.end(),
            biases_.begin());
}

double RiskFunction::operator()(std::span<const double> x) const {
  if (x.size() != input_dim()) {
    throw ShapeError("covariate dimension " + std::to_string(x.size()) + " != risk input " +
                     std::to_string(input_dim()));
  }
  RiskWorkspace ws;
  return forward(x, ws);
}

double RiskFunction::forward(std::span<const double> x, RiskWorkspace& ws) const {
  switch (kind_) {
    case RiskKind::Linear: {
      double g = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) g += weights_[k] * x[k];
      return g;
    }
    case RiskKind::Quadratic: {
      double g = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) g += weights_[k] * x[k] * x[k];
      return g;
    }
    case RiskKind::Mlp: break;
  }
  std::size_t total = 0;
  for (std::size_t l = 1; l < widths_.size(); ++l) total += widths_[l];
  ws.activations.resize(total);
  const double* in = x.data();
  double* out = ws.activations.data();
  std::size_t w_off = 0, b_off = 0;
  const std::size_t n_layers = widths_.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::size_t n_in = widths_[l], n_out = widths_[l + 1];
    for (std::size_t o = 0; o < n_out; ++o) {
      const double* row = weights_.data() + w_off + o * n_in;
      double z = biases_[b_off + o];
      for (std::size_t i = 0; i < n_in; ++i) z += row[i] * in[i];
      out[o] = l + 1 < n_layers ? elu(z) : z;
    }
    w_off += n_in * n_out;
    b_off += n_out;
    in = out;
    out += n_out;
  }
  return ws.activations.back();
}

void RiskFunction::accumulate_gradient(std::span<const double> x, RiskWorkspace& ws,
                                       double upstream, std::span<double> grad) const {
  switch (kind_) {
    case RiskKind::Linear:
      for (std::size_t k = 0; k < x.size(); ++k) grad[k] += upstream * x[k];
      return;
    case RiskKind::Quadratic:
      for (std::size_t k = 0; k < x.size(); ++k) grad[k] += upstream * x[k] * x[k];
      return;
    case RiskKind::Mlp: break;
  }
  const std::size_t n_layers = widths_.size() - 1;
  ws.deltas.assign(ws.activations.size(), 0.0);
  // Offsets of each layer's outputs, weights and biases.
  std::vector<std::size_t> a_off(n_layers), w_off(n_layers), b_off(n_layers);
  {
    std::size_t a = 0, w = 0, b = 0;
    for (std::size_t l = 0; l < n_layers; ++l) {
      a_off[l] = a;
      w_off[l] = w;
      b_off[l] = b;
      a += widths_[l + 1];
      w += widths_[l] * widths_[l + 1];
      b += widths_[l + 1];
    }
  }
  const std::size_t n_weights = weights_.size();
  ws.deltas[a_off[n_layers - 1]] = upstream;
  for (std::size_t l = n_layers; l-- > 0;) {
    const std::size_t n_in = widths_[l], n_out = widths_[l + 1];
    double* delta = ws.deltas.data() + a_off[l];
    const double* act = ws.activations.data() + a_off[l];
    if (l + 1 < n_layers) {
      // ELU'(z) = 1 for z > 0, else elu(z) + 1.
      for (std::size_t o = 0; o < n_out; ++o) {
        if (act[o] <= 0.0) delta[o] *= act[o] + 1.0;
      }
    }
    const double* in = l == 0 ? x.data() : ws.activations.data() + a_off[l - 1];
    double* d_in = l == 0 ? nullptr : ws.deltas.data() + a_off[l - 1];
    for (std::size_t o = 0; o < n_out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      double* g_row = grad.data() + w_off[l] + o * n_in;
      const double* w_row = weights_.data() + w_off[l] + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) {
        g_row[i] += d * in[i];
        if (d_in) d_in[i] += d * w_row[i];
      }
      grad[n_weights + b_off[l] + o] += d;
    }
  }
}

double RiskFunction::weight_norm_squared() const {
  double s = 0.0;
  for (double w : weights_) s += w * w;
  return s;
}

}  // namespace copsurv
