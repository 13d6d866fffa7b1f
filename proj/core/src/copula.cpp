#include "copsurv/copula.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "copsurv/error.hpp"
#include "copsurv/stats.hpp"

namespace copsurv {

namespace {

constexpr double kQuantileFloor = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_quantile(double u) { return std::clamp(u, kQuantileFloor, 1.0 - kQuantileFloor); }

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double softplus(double y) { return y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y)); }

void check_quantile(double u, const char* name) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError(std::string("copula: quantile ") + name + " outside [0, 1]");
  }
}

// ---------------------------------------------------------------------------
// Clayton, evaluated from log quantiles.

struct ClaytonTerms {
  double log_a;  // log(u1^-theta + u2^-theta - 1)
  double r1;     // u1^-theta / A
  double r2;     // u2^-theta / A
};

ClaytonTerms clayton_terms(double theta, double l1, double l2) {
  const double a1 = -theta * l1;
  const double a2 = -theta * l2;
  const double m = std::max(a1, a2);
  double log_a;
  if (m < 0.5) {
    log_a = std::log1p(std::expm1(a1) + std::expm1(a2));
  } else {
    log_a = m + std::log(std::exp(a1 - m) + std::exp(a2 - m) - std::exp(-m));
  }
  return {log_a, std::exp(a1 - log_a), std::exp(a2 - log_a)};
}

double clayton_cdf(double theta, double u1, double u2) {
  const ClaytonTerms t = clayton_terms(theta, std::log(u1), std::log(u2));
  return std::exp(-t.log_a / theta);
}

LogPartial clayton_log_partial_u1(double theta, double l1, double l2) {
  const ClaytonTerms t = clayton_terms(theta, l1, l2);
  const double k = (1.0 + theta) / theta;
  LogPartial out;
  out.value = -k * t.log_a - (1.0 + theta) * l1;
  out.d_log_u1 = (1.0 + theta) * (t.r1 - 1.0);
  out.d_log_u2 = (1.0 + theta) * t.r2;
  out.d_params[0] = t.log_a / (theta * theta) + k * (l1 * t.r1 + l2 * t.r2) - l1;
  return out;
}

double clayton_density(double theta, double u1, double u2) {
  const double l1 = std::log(u1), l2 = std::log(u2);
  const ClaytonTerms t = clayton_terms(theta, l1, l2);
  return std::exp(std::log1p(theta) - (1.0 + theta) * (l1 + l2) - (1.0 / theta + 2.0) * t.log_a);
}

// Closed-form inverse of v = dC/du1(u1, .) for Clayton.
double clayton_conditional_quantile(double theta, double u1, double v) {
  if (v >= 1.0) return 1.0;
  if (v <= 0.0) return 0.0;
  const double x = std::expm1(-theta / (1.0 + theta) * std::log(v));
  const double log_u2 = -softplus(-theta * std::log(u1) + std::log(x)) / theta;
  return std::exp(log_u2);
}

// ---------------------------------------------------------------------------
// Frank. Every exponential is scaled by exp(-s), s = theta * max(u1, u2),
// which cancels in all ratios and keeps theta up to kFrankThetaMax finite.

struct FrankTerms {
  double s;
  double e1, e2;    // exp(theta u_k - s)
  double em1, em2;  // expm1(theta u_k) * exp(-s)
  double w1, w2;    // 1 - exp(theta (u_k - 1))
  double n;         // scaled e^{theta u1} + e^{theta u2} - 1 - e^{theta (u1 + u2 - 1)}
};

double scaled_expm1(double x, double s) {
  return x > 1.0 ? std::exp(x - s) - std::exp(-s) : std::exp(-s) * std::expm1(x);
}

FrankTerms frank_terms(double theta, double u1, double u2) {
  FrankTerms t;
  t.s = theta * std::max(u1, u2);
  t.e1 = std::exp(theta * u1 - t.s);
  t.e2 = std::exp(theta * u2 - t.s);
  t.em1 = scaled_expm1(theta * u1, t.s);
  t.em2 = scaled_expm1(theta * u2, t.s);
  t.w1 = -std::expm1(theta * (u1 - 1.0));
  t.w2 = -std::expm1(theta * (u2 - 1.0));
  t.n = t.e1 * t.w2 + t.em2;
  return t;
}

double frank_cdf(double theta, double u1, double u2) {
  const FrankTerms t = frank_terms(theta, u1, u2);
  const double c = u1 + u2 - (std::log(t.n) + t.s - std::log(-std::expm1(-theta))) / theta;
  return std::clamp(c, std::max(u1 + u2 - 1.0, 0.0), std::min(u1, u2));
}

LogPartial frank_log_partial_u1_q(double theta, double u1, double u2) {
  const FrankTerms t = frank_terms(theta, u1, u2);
  LogPartial out;
  out.value = std::log(t.em2) - std::log(t.n);
  out.d_log_u1 = u1 * (-theta * t.e1 * t.w2 / t.n);
  out.d_log_u2 = u2 * (theta * t.e2 / t.em2 - theta * t.e2 * t.w1 / t.n);
  const double dn_dtheta = u1 * t.e1 * t.w2 + (1.0 - u2) * t.e1 * (1.0 - t.w2) + u2 * t.e2;
  out.d_params[0] = u2 * t.e2 / t.em2 - dn_dtheta / t.n;
  return out;
}

LogPartial frank_log_partial_u1(double theta, double l1, double l2) {
  return frank_log_partial_u1_q(theta, clamp_quantile(std::exp(l1)), clamp_quantile(std::exp(l2)));
}

double frank_density(double theta, double u1, double u2) {
  const FrankTerms t = frank_terms(theta, u1, u2);
  return theta * (-std::expm1(-theta)) * std::exp(theta * (u1 + u2) - 2.0 * t.s) / (t.n * t.n);
}

double frank_conditional_quantile(double theta, double u1, double v) {
  if (v >= 1.0) return 1.0;
  if (v <= 0.0) return 0.0;
  const double b = v * std::expm1(-theta) / (v + (1.0 - v) * std::exp(-theta * u1));
  return std::clamp(-std::log1p(b) / theta, 0.0, 1.0);
}

// ---------------------------------------------------------------------------

LogPartial mixture_log_partial_u1(const CopulaSpec& spec, double l1, double l2) {
  const LogPartial f = frank_log_partial_u1(spec.theta_frank, l1, l2);
  const LogPartial c = clayton_log_partial_u1(spec.theta_clayton, l1, l2);
  const double log_kf = spec.kappa > 0.0 ? std::log(spec.kappa) : -kInf;
  const double log_kc = spec.kappa < 1.0 ? std::log1p(-spec.kappa) : -kInf;
  LogPartial out;
  out.value = log_add_exp(log_kf + f.value, log_kc + c.value);
  const double wf = std::exp(log_kf + f.value - out.value);
  const double wc = std::exp(log_kc + c.value - out.value);
  out.d_log_u1 = wf * f.d_log_u1 + wc * c.d_log_u1;
  out.d_log_u2 = wf * f.d_log_u2 + wc * c.d_log_u2;
  out.d_params[0] = wf * f.d_params[0];
  out.d_params[1] = wc * c.d_params[0];
  out.d_params[2] = std::exp(f.value - out.value) - std::exp(c.value - out.value);
  return out;
}

double frank_tau(double theta) {
  if (theta < 1e-2) {
    const double t2 = theta * theta;
    return theta / 9.0 - theta * t2 / 900.0 + theta * t2 * t2 / 52920.0;
  }
  return 1.0 - 4.0 / theta * (1.0 - debye1(theta));
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::Independence: return "Independence";
    case CopulaFamily::Clayton: return "Clayton";
    case CopulaFamily::Frank: return "Frank";
    case CopulaFamily::Mixture: return "Mixture";
  }
  return "Unknown";
}

CopulaFamily parse_copula_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "independence") return CopulaFamily::Independence;
  if (lower == "clayton") return CopulaFamily::Clayton;
  if (lower == "frank") return CopulaFamily::Frank;
  if (lower == "mixture") return CopulaFamily::Mixture;
  throw ValidationError("unknown copula family '" + std::string(name) + "'");
}

CopulaSpec CopulaSpec::clayton(double theta) {
  CopulaSpec s;
  s.family = CopulaFamily::Clayton;
  s.theta = theta;
  s.validate();
  return s;
}

CopulaSpec CopulaSpec::frank(double theta) {
  CopulaSpec s;
  s.family = CopulaFamily::Frank;
  s.theta = theta;
  s.validate();
  return s;
}

CopulaSpec CopulaSpec::mixture(double theta_frank, double theta_clayton, double kappa) {
  CopulaSpec s;
  s.family = CopulaFamily::Mixture;
  s.theta_frank = theta_frank;
  s.theta_clayton = theta_clayton;
  s.kappa = kappa;
  s.validate();
  return s;
}

void CopulaSpec::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  switch (family) {
    case CopulaFamily::Independence: return;
    case CopulaFamily::Clayton:
      if (!positive(theta)) throw DomainError("Clayton theta must be finite and > 0");
      return;
    case CopulaFamily::Frank:
      if (!positive(theta) || theta > kFrankThetaMax) {
        throw DomainError("Frank theta must lie in (0, 500]");
      }
      return;
    case CopulaFamily::Mixture:
      if (!positive(theta_frank) || theta_frank > kFrankThetaMax || !positive(theta_clayton)) {
        throw DomainError("mixture component thetas must be > 0 (Frank <= 500)");
      }
      if (!(kappa >= 0.0 && kappa <= 1.0)) throw DomainError("mixture kappa must lie in [0, 1]");
      return;
  }
}

std::size_t CopulaSpec::num_parameters() const {
  switch (family) {
    case CopulaFamily::Independence: return 0;
    case CopulaFamily::Clayton:
    case CopulaFamily::Frank: return 1;
    case CopulaFamily::Mixture: return 3;
  }
  return 0;
}

std::vector<double> CopulaSpec::parameters() const {
  switch (family) {
    case CopulaFamily::Independence: return {};
    case CopulaFamily::Clayton:
    case CopulaFamily::Frank: return {theta};
    case CopulaFamily::Mixture: return {theta_frank, theta_clayton, kappa};
  }
  return {};
}

void CopulaSpec::set_parameters(std::span<const double> values) {
  if (values.size() != num_parameters()) throw ShapeError("copula parameter count mismatch");
  if (family == CopulaFamily::Clayton || family == CopulaFamily::Frank) {
    theta = values[0];
  } else if (family == CopulaFamily::Mixture) {
    theta_frank = values[0];
    theta_clayton = values[1];
    kappa = values[2];
  }
}

double copula_cdf(const CopulaSpec& spec, double u1, double u2) {
  spec.validate();
  check_quantile(u1, "u1");
  check_quantile(u2, "u2");
  if (u1 == 0.0 || u2 == 0.0) return 0.0;
  if (u1 == 1.0) return u2;
  if (u2 == 1.0) return u1;
  switch (spec.family) {
    case CopulaFamily::Independence: return u1 * u2;
    case CopulaFamily::Clayton: return clayton_cdf(spec.theta, u1, u2);
    case CopulaFamily::Frank: return frank_cdf(spec.theta, u1, u2);
    case CopulaFamily::Mixture:
      return spec.kappa * frank_cdf(spec.theta_frank, u1, u2) +
             (1.0 - spec.kappa) * clayton_cdf(spec.theta_clayton, u1, u2);
  }
  return 0.0;
}

LogPartial log_partial_u1(const CopulaSpec& spec, double log_u1, double log_u2) {
  switch (spec.family) {
    case CopulaFamily::Independence: {
      LogPartial out;
      out.value = log_u2;
      out.d_log_u2 = 1.0;
      return out;
    }
    case CopulaFamily::Clayton: return clayton_log_partial_u1(spec.theta, log_u1, log_u2);
    case CopulaFamily::Frank: return frank_log_partial_u1(spec.theta, log_u1, log_u2);
    case CopulaFamily::Mixture: return mixture_log_partial_u1(spec, log_u1, log_u2);
  }
  return {};
}

LogPartial log_partial_u2(const CopulaSpec& spec, double log_u1, double log_u2) {
  LogPartial swapped = log_partial_u1(spec, log_u2, log_u1);
  std::swap(swapped.d_log_u1, swapped.d_log_u2);
  return swapped;
}

double copula_partial_u1(const CopulaSpec& spec, double u1, double u2) {
  spec.validate();
  check_quantile(u1, "u1");
  check_quantile(u2, "u2");
  const bool has_clayton =
      spec.family == CopulaFamily::Clayton || spec.family == CopulaFamily::Mixture;
  if (u1 == 0.0 && has_clayton) {
    throw DomainError("Clayton partial derivative is undefined at u1 = 0");
  }
  if (spec.family == CopulaFamily::Independence) return u2;
  if (u2 == 0.0) return 0.0;
  if (u2 == 1.0) return 1.0;
  if (spec.family == CopulaFamily::Frank) {
    return std::exp(frank_log_partial_u1_q(spec.theta, clamp_quantile(u1), u2).value);
  }
  return std::exp(log_partial_u1(spec, std::log(u1), std::log(u2)).value);
}

double copula_partial_u2(const CopulaSpec& spec, double u1, double u2) {
  return copula_partial_u1(spec, u2, u1);
}

double copula_density(const CopulaSpec& spec, double u1, double u2) {
  spec.validate();
  check_quantile(u1, "u1");
  check_quantile(u2, "u2");
  u1 = clamp_quantile(u1);
  u2 = clamp_quantile(u2);
  switch (spec.family) {
    case CopulaFamily::Independence: return 1.0;
    case CopulaFamily::Clayton: return clayton_density(spec.theta, u1, u2);
    case CopulaFamily::Frank: return frank_density(spec.theta, u1, u2);
    case CopulaFamily::Mixture:
      return spec.kappa * frank_density(spec.theta_frank, u1, u2) +
             (1.0 - spec.kappa) * clayton_density(spec.theta_clayton, u1, u2);
  }
  return 0.0;
}

double conditional_quantile_bisection(const CopulaSpec& spec, double u1, double v) {
  spec.validate();
  if (!(u1 > 0.0 && u1 < 1.0)) throw DomainError("conditional quantile needs u1 in (0, 1)");
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("conditional quantile needs v in [0, 1]");
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (copula_partial_u1(spec, u1, mid) < v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double conditional_quantile(const CopulaSpec& spec, double u1, double v) {
  spec.validate();
  if (!(u1 > 0.0 && u1 < 1.0)) throw DomainError("conditional quantile needs u1 in (0, 1)");
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("conditional quantile needs v in [0, 1]");
  switch (spec.family) {
    case CopulaFamily::Independence: return v;
    case CopulaFamily::Clayton: return clayton_conditional_quantile(spec.theta, u1, v);
    case CopulaFamily::Frank: return frank_conditional_quantile(spec.theta, u1, v);
    case CopulaFamily::Mixture: return conditional_quantile_bisection(spec, u1, v);
  }
  return v;
}

double conditional_sample(const CopulaSpec& spec, double u1, Rng& rng) {
  return conditional_quantile(spec, u1, rng.uniform());
}

std::vector<std::pair<double, double>> sample_pairs(const CopulaSpec& spec, std::size_t n,
                                                    Rng& rng) {
  if (n == 0) throw ValidationError("sample_pairs: n must be >= 1");
  spec.validate();
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u1 = rng.uniform();
    out.emplace_back(u1, conditional_sample(spec, u1, rng));
  }
  return out;
}

double debye1(double x) {
  if (x == 0.0) return 1.0;
  if (!std::isfinite(x) || x < 0.0) throw DomainError("debye1 needs a finite x >= 0");
  auto integrand = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
  double error = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 21>::integrate(integrand, 0.0, x, 15, 1e-12,
                                                                    &error);
  return integral / x;
}

double theta_to_tau(const CopulaSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case CopulaFamily::Independence: return 0.0;
    case CopulaFamily::Clayton: return spec.theta / (spec.theta + 2.0);
    case CopulaFamily::Frank: return frank_tau(spec.theta);
    case CopulaFamily::Mixture:
      throw DomainError("theta_to_tau has no closed form for mixtures; use kendall_tau_monte_carlo");
  }
  return 0.0;
}

double tau_to_theta(CopulaFamily family, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("tau_to_theta needs tau in (0, 1)");
  switch (family) {
    case CopulaFamily::Clayton: return 2.0 * tau / (1.0 - tau);
    case CopulaFamily::Frank: {
      double lo = 1e-6, hi = kFrankThetaMax;
      if (tau > frank_tau(hi)) throw DomainError("tau beyond the supported Frank range");
      while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        if (frank_tau(mid) < tau) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    default: throw DomainError("tau_to_theta is defined for Clayton and Frank only");
  }
}

CopulaSpec copula_from_tau(CopulaFamily family, double tau) {
  if (tau == 0.0) return CopulaSpec::independence();
  switch (family) {
    case CopulaFamily::Clayton: return CopulaSpec::clayton(tau_to_theta(family, tau));
    case CopulaFamily::Frank: return CopulaSpec::frank(tau_to_theta(family, tau));
    case CopulaFamily::Mixture:
      return CopulaSpec::mixture(tau_to_theta(CopulaFamily::Frank, tau),
                                 tau_to_theta(CopulaFamily::Clayton, tau), 0.5);
    case CopulaFamily::Independence: break;
  }
  throw DomainError("Independence copula has tau = 0 only");
}

double kendall_tau_monte_carlo(const CopulaSpec& spec, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const auto pairs = sample_pairs(spec, n, rng);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = pairs[i].first;
    b[i] = pairs[i].second;
  }
  return stats::kendall_tau(a, b);
}

}  // namespace copsurv
