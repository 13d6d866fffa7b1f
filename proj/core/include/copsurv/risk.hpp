#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "copsurv/rng.hpp"

namespace copsurv {

// Linear: beta' x (no intercept).
// Mlp: fully connected, ELU (alpha = 1) on hidden layers, identity output.
// Quadratic: sum_k c_k x_k^2 (ground-truth risk of the nonlinear generators).
enum class RiskKind { Linear, Mlp, Quadratic };

std::string_view to_string(RiskKind kind);
RiskKind parse_risk_kind(std::string_view name);

double elu(double x);

// Scratch space for one forward/backward pass through an MLP.
struct RiskWorkspace {
  std::vector<double> activations;  // layer outputs, concatenated
  std::vector<double> deltas;
};

// Maps a covariate vector to a scalar log-risk g(x).
//
// Parameters are flattened as all weights (layer by layer, row-major
// out x in) followed by all biases. Linear and Quadratic carry no biases.
class RiskFunction {
 public:
  static RiskFunction linear(std::vector<double> beta);
  static RiskFunction quadratic(std::vector<double> coefficients);
  // Zero weights and biases.
  static RiskFunction mlp(std::vector<std::size_t> widths);
  // Weights ~ U[-1/sqrt(fan_in), 1/sqrt(fan_in)], biases 0.
  static RiskFunction mlp(std::vector<std::size_t> widths, Rng& rng);
  // Linear and Quadratic also use the fan-in uniform rule; `hidden` is only read for Mlp.
  static RiskFunction initialized(RiskKind kind, std::size_t dim,
                                  std::span<const std::size_t> hidden, Rng& rng);
  // Raw construction (checkpoint loading); validates shapes.
  static RiskFunction from_parts(RiskKind kind, std::vector<std::size_t> widths,
                                 std::vector<double> weights, std::vector<double> biases);

  RiskKind kind() const { return kind_; }
  std::size_t input_dim() const { return widths_.front(); }
  const std::vector<std::size_t>& widths() const { return widths_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> biases() const { return biases_; }

  std::size_t num_parameters() const { return weights_.size() + biases_.size(); }
  std::size_t num_weights() const { return weights_.size(); }
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> values);

  // Throws ShapeError when x has the wrong dimension.
  double operator()(std::span<const double> x) const;

  // Unchecked evaluation used by the likelihood hot loop; for Mlp the
  // workspace keeps the activations needed by accumulate_gradient.
  double forward(std::span<const double> x, RiskWorkspace& ws) const;
  // grad += upstream * dg/dparams at x (after forward(x, ws)).
  void accumulate_gradient(std::span<const double> x, RiskWorkspace& ws, double upstream,
                           std::span<double> grad) const;

  // Sum of squared weights (biases excluded).
  double weight_norm_squared() const;

  bool operator==(const RiskFunction&) const = default;

 private:
  RiskFunction(RiskKind kind, std::vector<std::size_t> widths, std::vector<double> weights,
               std::vector<double> biases);

  RiskKind kind_ = RiskKind::Linear;
  std::vector<std::size_t> widths_;
  std::vector<double> weights_;
  std::vector<double> biases_;
};

}  // namespace copsurv
