#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "copsurv/rng.hpp"

namespace copsurv {

enum class CopulaFamily { Independence, Clayton, Frank, Mixture };

std::string_view to_string(CopulaFamily family);
// Accepts "independence", "clayton", "frank", "mixture" (case-insensitive).
CopulaFamily parse_copula_family(std::string_view name);

// Bivariate Archimedean survival copula with positive dependence.
//
// Mixture is the convex combination kappa * Frank(theta_frank) +
// (1 - kappa) * Clayton(theta_clayton).
struct CopulaSpec {
  CopulaFamily family = CopulaFamily::Independence;
  double theta = 0.0;
  double theta_frank = 0.0;
  double theta_clayton = 0.0;
  double kappa = 0.5;

  static CopulaSpec independence() { return {}; }
  static CopulaSpec clayton(double theta);
  static CopulaSpec frank(double theta);
  static CopulaSpec mixture(double theta_frank, double theta_clayton, double kappa);

  // Throws DomainError when the dependence parameters are out of range.
  void validate() const;

  // Free parameters in optimizer order: {} | {theta} | {theta_frank, theta_clayton, kappa}.
  std::size_t num_parameters() const;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> values);

  bool operator==(const CopulaSpec&) const = default;
};

// Largest Frank parameter the library evaluates and inverts.
inline constexpr double kFrankThetaMax = 500.0;

double copula_cdf(const CopulaSpec& spec, double u1, double u2);
double copula_partial_u1(const CopulaSpec& spec, double u1, double u2);
double copula_partial_u2(const CopulaSpec& spec, double u1, double u2);
double copula_density(const CopulaSpec& spec, double u1, double u2);

// log dC/du1 together with its derivatives with respect to log u1, log u2
// and the copula parameters (same order as CopulaSpec::parameters()).
// Inputs are log quantiles so that extreme survival probabilities keep
// full precision; this is the form the likelihood consumes.
struct LogPartial {
  double value = 0.0;
  double d_log_u1 = 0.0;
  double d_log_u2 = 0.0;
  std::array<double, 3> d_params{};
};

LogPartial log_partial_u1(const CopulaSpec& spec, double log_u1, double log_u2);
LogPartial log_partial_u2(const CopulaSpec& spec, double log_u1, double log_u2);

// Solves dC/du1(u1, u2) = v for u2. Closed form for Independence, Clayton
// and Frank; bisection for Mixture.
double conditional_quantile(const CopulaSpec& spec, double u1, double v);
// Bracketed bisection on [0, 1] (tolerance 1e-10, at most 200 iterations).
double conditional_quantile_bisection(const CopulaSpec& spec, double u1, double v);

double conditional_sample(const CopulaSpec& spec, double u1, Rng& rng);
std::vector<std::pair<double, double>> sample_pairs(const CopulaSpec& spec, std::size_t n,
                                                    Rng& rng);

// Debye function of order one, D1(x) = (1/x) * integral_0^x t / (e^t - 1) dt.
double debye1(double x);

// Kendall's tau of a non-mixture copula.
double theta_to_tau(const CopulaSpec& spec);
double tau_to_theta(CopulaFamily family, double tau);

// Spec at the requested Kendall tau; tau == 0 yields Independence.
CopulaSpec copula_from_tau(CopulaFamily family, double tau);

// Monte Carlo Kendall tau (used for mixtures, which have no closed form).
double kendall_tau_monte_carlo(const CopulaSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace copsurv
