#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "copsurv/error.hpp"
#include "copsurv/likelihood.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace copsurv;

namespace {

WeibullCoxModel exponential(std::size_t d = 1) {
  return WeibullCoxModel(1.0, 1.0, RiskFunction::linear(std::vector<double>(d, 0.0)));
}

SurvivalDataset single(double t, int delta) {
  SurvivalDataset data(1);
  data.add(std::vector<double>{0.0}, t, delta);
  return data;
}

}  // namespace

TEST_CASE("hand examples") {
  CHECK(loglik_independent(exponential(), exponential(), single(1.0, 1)) ==
        doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(loglik_copula(exponential(), exponential(), CopulaSpec::independence(), single(1.0, 1)) ==
        doctest::Approx(-2.0).epsilon(1e-14));

  // Clayton theta = 2 at u1 = u2 = 1/e:
  // log f_E + log[(u1^-2 + u2^-2 - 1)^(-3/2) u1^-3] = -1 + 3 - 1.5 log(2 e^2 - 1).
  const double e2 = std::exp(2.0);
  const double expected = 2.0 - 1.5 * std::log(2.0 * e2 - 1.0);
  const CopulaSpec clayton = CopulaSpec::clayton(2.0);
  CHECK(loglik_copula(exponential(), exponential(), clayton, single(1.0, 1)) ==
        doctest::Approx(expected).epsilon(1e-13));
  const double u = std::exp(-1.0);
  CHECK(expected == doctest::Approx(-1.0 + std::log(oracle::partial_u1(clayton, u, u))).epsilon(1e-12));
  // Censored record uses the other partial; equal by symmetry here.
  CHECK(loglik_copula(exponential(), exponential(), clayton, single(1.0, 0)) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("empty dataset") {
  const SurvivalDataset empty(1);
  CHECK(loglik_independent(exponential(), exponential(), empty) == 0.0);
  CHECK(loglik_copula(exponential(), exponential(), CopulaSpec::frank(2.0), empty) == 0.0);
  const auto obj = loglik_gradient(exponential(), exponential(), CopulaSpec::frank(2.0), empty);
  CHECK(obj.value == 0.0);
  for (double g : obj.gradient.event) CHECK(g == 0.0);
}

TEST_CASE("independence family reduces to the factorized likelihood") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const RiskKind kind = trial % 2 ? RiskKind::Mlp : RiskKind::Linear;
    const auto ev = fixtures::random_margin(rng, kind, 3);
    const auto ce = fixtures::random_margin(rng, kind, 3);
    const auto data = fixtures::random_dataset(rng, 200, 3);
    CHECK(std::abs(loglik_copula(ev, ce, CopulaSpec::independence(), data) -
                   loglik_independent(ev, ce, data)) <= 1e-10);
  }
}

TEST_CASE("permutation invariance") {
  Rng rng(22);
  const auto ev = fixtures::random_margin(rng, RiskKind::Linear, 3);
  const auto ce = fixtures::random_margin(rng, RiskKind::Linear, 3);
  const auto data = fixtures::random_dataset(rng, 1000, 3);
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  rng.shuffle(std::span<std::size_t>(idx));
  const auto shuffled = data.subset(idx);
  for (const auto& spec : fixtures::gradient_specs()) {
    const double a = loglik_copula(ev, ce, spec, data);
    const double b = loglik_copula(ev, ce, spec, shuffled);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
  }
}

TEST_CASE("gradient matches finite differences") {
  Rng rng(23);
  for (RiskKind kind : {RiskKind::Linear, RiskKind::Mlp}) {
    for (const auto& spec : fixtures::gradient_specs()) {
      for (int trial = 0; trial < 3; ++trial) {
        const auto ev = fixtures::random_margin(rng, kind, 3);
        const auto ce = fixtures::random_margin(rng, kind, 3);
        const auto data = fixtures::random_dataset(rng, 20, 3);
        const double l2 = trial == 2 ? 1e-3 : 0.0;
        INFO("risk " << to_string(kind) << " family " << to_string(spec.family));
        CHECK(fixtures::gradient_max_rel_err(ev, ce, spec, data, l2) < 1e-4);
      }
    }
  }
}

TEST_CASE("objective value includes the penalty") {
  Rng rng(24);
  const auto ev = fixtures::random_margin(rng, RiskKind::Mlp, 2);
  const auto ce = fixtures::random_margin(rng, RiskKind::Mlp, 2);
  const auto data = fixtures::random_dataset(rng, 50, 2);
  const CopulaSpec spec = CopulaSpec::clayton(1.3);
  const auto obj = loglik_gradient(ev, ce, spec, data, 0.01);
  const double penalty = 0.01 * (ev.risk().weight_norm_squared() + ce.risk().weight_norm_squared());
  CHECK(obj.value == doctest::Approx(loglik_copula(ev, ce, spec, data) - penalty).epsilon(1e-12));
  CHECK(obj.gradient.event.size() == ev.num_parameters());
  CHECK(obj.gradient.censor.size() == ce.num_parameters());
  CHECK(obj.gradient.copula.size() == 1);
  CHECK(loglik_gradient(ev, ce, CopulaSpec::independence(), data).gradient.copula.empty());
  CHECK(loglik_gradient(ev, ce, CopulaSpec::mixture(1.0, 2.0, 0.5), data).gradient.copula.size() == 3);
}

TEST_CASE("duplicated hidden units receive identical gradients") {
  SUBCASE("all-zero network") {
    Rng rng(25);
    const auto data = fixtures::random_dataset(rng, 40, 2);
    const WeibullCoxModel ev(1.5, 1.2, RiskFunction::mlp({2, 3, 1}));
    const WeibullCoxModel ce(1.1, 1.4, RiskFunction::mlp({2, 3, 1}));
    const auto g = loglik_gradient(ev, ce, CopulaSpec::clayton(2.0), data).gradient.event;
    // First layer rows are units 0..2, two weights each.
    for (std::size_t unit = 1; unit < 3; ++unit) {
      CHECK(g[2 + 2 * unit] == g[2]);
      CHECK(g[2 + 2 * unit + 1] == g[3]);
    }
  }
  SUBCASE("twin units with equal incoming and outgoing weights") {
    Rng rng(26);
    const auto data = fixtures::random_dataset(rng, 40, 2);
    // widths {2, 2, 1}: layer-1 weights w00 w01 w10 w11, layer-2 weights v0 v1; biases b0 b1 c.
    const auto risk = RiskFunction::from_parts(RiskKind::Mlp, {2, 2, 1}, {0.3, -0.7, 0.3, -0.7, 0.5, 0.5},
                                               {0.1, 0.1, -0.2});
    const WeibullCoxModel ev(1.5, 1.2, risk);
    const WeibullCoxModel ce(1.1, 1.4, RiskFunction::mlp({2, 2, 1}));
    const auto g = loglik_gradient(ev, ce, CopulaSpec::frank(2.0), data).gradient.event;
    CHECK(g[2] == doctest::Approx(g[4]).epsilon(1e-14));
    CHECK(g[3] == doctest::Approx(g[5]).epsilon(1e-14));
    CHECK(g[6] == doctest::Approx(g[7]).epsilon(1e-14));
    CHECK(g[8] == doctest::Approx(g[9]).epsilon(1e-14));
  }
}

TEST_CASE("marginal likelihood") {
  Rng rng(27);
  const auto m = fixtures::random_margin(rng, RiskKind::Linear, 3);
  const auto data = fixtures::random_dataset(rng, 100, 3);
  double expected = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    expected += data.event(i) ? m.log_density(data.time(i), data.x(i)) : m.log_survival(data.time(i), data.x(i));
  }
  CHECK(loglik_marginal(m, data) == doctest::Approx(expected).epsilon(1e-12));
  const auto obj = loglik_marginal_gradient(m, data);
  auto p = m.parameters();
  auto f = [&](const std::vector<double>& v) {
    WeibullCoxModel c = m;
    c.set_parameters(v);
    return loglik_marginal(c, data);
  };
  for (std::size_t k = 0; k < p.size(); ++k) {
    CHECK(testutil::rel_err(obj.gradient.event[k], testutil::central_difference(f, p, k)) < 1e-6);
  }
}

TEST_CASE("non-finite terms report the record") {
  SurvivalDataset data(1);
  data.add(std::vector<double>{0.0}, 1.0, 1);
  data.add(std::vector<double>{0.0}, 2.0, 0);
  data.add(std::vector<double>{0.0}, 1e300, 1);
  const WeibullCoxModel ev(4.0, 1.0, RiskFunction::linear({0.0}));
  for (const auto& spec : fixtures::gradient_specs()) {
    try {
      loglik_copula(ev, exponential(), spec, data);
      FAIL("expected NumericalFailure");
    } catch (const NumericalFailure& e) {
      REQUIRE(e.record_index().has_value());
      CHECK(*e.record_index() == 2);
    }
    CHECK_THROWS_AS(loglik_gradient(ev, exponential(), spec, data), NumericalFailure);
  }
  CHECK_THROWS_AS(loglik_independent(ev, exponential(), data), NumericalFailure);
}

TEST_CASE("dimension mismatch") {
  Rng rng(28);
  const auto data = fixtures::random_dataset(rng, 10, 3);
  CHECK_THROWS_AS(loglik_copula(exponential(2), exponential(2), CopulaSpec::clayton(1.0), data), ShapeError);
}
