#pragma once

// Independent reference implementations used as test oracles. They follow
// the textbook formulas directly, in 50-digit arithmetic, and share no code
// with the library.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <functional>
#include <vector>

#include "copsurv/copula.hpp"

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

inline Big clayton_cdf(Big theta, Big u1, Big u2) {
  using boost::multiprecision::pow;
  return pow(pow(u1, -theta) + pow(u2, -theta) - 1, -1 / theta);
}

inline Big frank_cdf(Big theta, Big u1, Big u2) {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  return -log(1 + (exp(-theta * u1) - 1) * (exp(-theta * u2) - 1) / (exp(-theta) - 1)) / theta;
}

inline Big cdf(const copsurv::CopulaSpec& s, Big u1, Big u2) {
  switch (s.family) {
    case copsurv::CopulaFamily::Independence: return u1 * u2;
    case copsurv::CopulaFamily::Clayton: return clayton_cdf(s.theta, u1, u2);
    case copsurv::CopulaFamily::Frank: return frank_cdf(s.theta, u1, u2);
    case copsurv::CopulaFamily::Mixture:
      return Big(s.kappa) * frank_cdf(s.theta_frank, u1, u2) +
             (1 - Big(s.kappa)) * clayton_cdf(s.theta_clayton, u1, u2);
  }
  return 0;
}

// Central difference of the 50-digit CDF; step small enough that the
// truncation error is far below double precision.
inline double partial_u1(const copsurv::CopulaSpec& s, double u1, double u2) {
  const Big h("1e-15");
  return static_cast<double>((cdf(s, Big(u1) + h, u2) - cdf(s, Big(u1) - h, u2)) / (2 * h));
}

inline double partial_u2(const copsurv::CopulaSpec& s, double u1, double u2) {
  const Big h("1e-15");
  return static_cast<double>((cdf(s, u1, Big(u2) + h) - cdf(s, u1, Big(u2) - h)) / (2 * h));
}

// Brute-force O(n^2) Kendall tau-b.
inline double kendall_tau_bruteforce(const std::vector<double>& x, const std::vector<double>& y) {
  double conc = 0, disc = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        tx += 1;
      } else if (dy == 0) {
        ty += 1;
      } else if (dx * dy > 0) {
        conc += 1;
      } else {
        disc += 1;
      }
    }
  }
  return (conc - disc) / std::sqrt((conc + disc + tx) * (conc + disc + ty));
}

}  // namespace oracle

namespace testutil {

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Central difference of f at x along coordinate k, step scaled by |x_k|.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, std::size_t k, double step = 1e-5) {
  const double h = step * std::max(1.0, std::abs(x[k]));
  const double x0 = x[k];
  x[k] = x0 + h;
  const double fp = f(x);
  x[k] = x0 - h;
  const double fm = f(x);
  return (fp - fm) / (2.0 * h);
}

}  // namespace testutil
