// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--report FILE] [--work DIR] [--only N,...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "copsurv/copula.hpp"
#include "copsurv/dataset.hpp"
#include "copsurv/experiment.hpp"
#include "copsurv/likelihood.hpp"
#include "copsurv/metrics.hpp"
#include "copsurv/rng.hpp"
#include "copsurv/stats.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace copsurv;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

std::vector<CopulaSpec> axiom_specs() {
  std::vector<CopulaSpec> specs{CopulaSpec::independence()};
  for (double th : {0.5, 2.0, 8.0}) {
    specs.push_back(CopulaSpec::clayton(th));
    specs.push_back(CopulaSpec::frank(th));
  }
  for (double k : {0.0, 0.5, 1.0}) {
    specs.push_back(CopulaSpec::mixture(tau_to_theta(CopulaFamily::Frank, 0.5), 2.0, k));
  }
  return specs;
}

Verdict copula_axioms() {
  double margin_err = 0.0, worst_volume = 0.0;
  Rng rng(101);
  for (const auto& s : axiom_specs()) {
    for (int k = 0; k <= 100; ++k) {
      const double u = k / 100.0;
      margin_err = std::max({margin_err, std::abs(copula_cdf(s, 0.0, u)), std::abs(copula_cdf(s, u, 0.0)),
                             std::abs(copula_cdf(s, u, 1.0) - u), std::abs(copula_cdf(s, 1.0, u) - u)});
    }
    for (int r = 0; r < 10000; ++r) {
      double a1 = rng.uniform(), b1 = rng.uniform(), a2 = rng.uniform(), b2 = rng.uniform();
      if (a1 > b1) std::swap(a1, b1);
      if (a2 > b2) std::swap(a2, b2);
      worst_volume = std::min(worst_volume, copula_cdf(s, b1, b2) - copula_cdf(s, b1, a2) -
                                                copula_cdf(s, a1, b2) + copula_cdf(s, a1, a2));
    }
  }
  return {margin_err <= 1e-12 && worst_volume >= -1e-12,
          "max boundary error " + fmt(margin_err) + ", min rectangle volume " + fmt(worst_volume)};
}

Verdict derivative_oracle() {
  double worst = 0.0;
  for (const auto& s : axiom_specs()) {
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const double u1 = (i + 0.5) / 20.0, u2 = (j + 0.5) / 20.0;
        worst = std::max(worst, testutil::rel_err(copula_partial_u1(s, u1, u2), oracle::partial_u1(s, u1, u2)));
        worst = std::max(worst, testutil::rel_err(copula_partial_u2(s, u1, u2), oracle::partial_u2(s, u1, u2)));
      }
    }
  }
  return {worst < 1e-5, "max rel. err " + fmt(worst) + " over 20x20 grids, 10 specs"};
}

Verdict sampler_consistency() {
  double worst = 0.0;
  std::uint64_t seed = 300;
  for (CopulaFamily fam : {CopulaFamily::Clayton, CopulaFamily::Frank}) {
    for (double tau : {0.2, 0.5, 0.8}) {
      const CopulaSpec s = copula_from_tau(fam, tau);
      Rng rng(seed++);
      const auto pairs = sample_pairs(s, 50000, rng);
      std::vector<double> a(pairs.size()), b(pairs.size());
      for (std::size_t i = 0; i < pairs.size(); ++i) std::tie(a[i], b[i]) = pairs[i];
      worst = std::max(worst, std::abs(stats::kendall_tau(a, b) - theta_to_tau(s)));
    }
  }
  return {worst <= 0.02, "max |tau_hat - tau| " + fmt(worst)};
}

Verdict gradient_correctness() {
  double worst = 0.0;
  Rng rng(400);
  for (RiskKind kind : {RiskKind::Linear, RiskKind::Mlp}) {
    for (const auto& spec : {CopulaSpec::clayton(2.0), CopulaSpec::frank(3.0), CopulaSpec::mixture(3.0, 1.5, 0.4)}) {
      for (int trial = 0; trial < 5; ++trial) {
        const auto ev = fixtures::random_margin(rng, kind, 3);
        const auto ce = fixtures::random_margin(rng, kind, 3);
        const auto data = fixtures::random_dataset(rng, 20, 3);
        worst = std::max(worst, fixtures::gradient_max_rel_err(ev, ce, spec, data, 0.0));
      }
    }
  }
  return {worst < 1e-4, "max componentwise rel. err " + fmt(worst)};
}

Verdict independence_reduction() {
  double worst = 0.0;
  Rng rng(500);
  for (int trial = 0; trial < 50; ++trial) {
    const RiskKind kind = trial % 2 ? RiskKind::Mlp : RiskKind::Linear;
    const auto ev = fixtures::random_margin(rng, kind, 4);
    const auto ce = fixtures::random_margin(rng, kind, 4);
    const auto data = fixtures::random_dataset(rng, 500, 4);
    worst = std::max(worst, std::abs(loglik_copula(ev, ce, CopulaSpec::independence(), data) -
                                     loglik_independent(ev, ce, data)));
  }
  return {worst <= 1e-10, "max abs diff " + fmt(worst)};
}

Verdict survival_l1_oracle() {
  const std::vector<SurvivalCurve> truth{{[](double t) { return std::exp(-t); },
                                          [](double q) { return -std::log(q); }}};
  const std::vector<SurvivalCurve> est{{[](double t) { return std::exp(-2.0 * t); },
                                        [](double q) { return -std::log(q) / 2.0; }}};
  const double tmax = std::log(100.0);
  const double exact = ((1.0 - std::exp(-tmax)) - 0.5 * (1.0 - std::exp(-2.0 * tmax))) / tmax;
  const double approx = survival_l1(truth, est);
  const double identity = survival_l1(truth, truth);
  return {std::abs(approx - exact) < 1e-3 && identity < 1e-12,
          "discretized " + fmt(approx) + " vs closed form " + fmt(exact) + ", identity " + fmt(identity)};
}

// Mean of a report field per (tau, model).
using Field = std::function<std::optional<double>(const EvaluationReport&)>;

std::map<std::pair<double, std::string>, std::vector<double>> collect(const ExperimentOutcome& o,
                                                                      const Field& f) {
  std::map<std::pair<double, std::string>, std::vector<double>> out;
  for (const auto& r : o.results) {
    if (auto v = f(r.report)) out[{r.tau_star, r.model}].push_back(*v);
  }
  return out;
}

double mean_of(const std::map<std::pair<double, std::string>, std::vector<double>>& m, double tau,
               const std::string& model) {
  const auto it = m.find({tau, model});
  if (it == m.end() || it->second.empty()) return std::nan("");
  return stats::mean(it->second);
}

struct Experiments {
  fs::path work;
  unsigned workers;
  std::map<std::string, ExperimentOutcome> outcomes;

  ExperimentConfig sweep() const {
    ExperimentConfig c;
    c.id = "synthetic_sweep";
    c.kind = ExperimentKind::SyntheticSweep;
    c.family = CopulaFamily::Clayton;
    c.preset = "linear_risk";
    c.taus = {0.0, 0.2, 0.4, 0.6, 0.8};
    c.seeds = {0, 1, 2, 3, 4};
    return c;
  }
  ExperimentConfig metric_bias() const {
    ExperimentConfig c;
    c.id = "metric_bias";
    c.kind = ExperimentKind::MetricBias;
    c.family = CopulaFamily::Clayton;
    c.taus = {0.01, 0.2, 0.4, 0.6, 0.8};
    c.seeds = {0, 1, 2, 3, 4};
    c.metric_bias_n = 10000;
    return c;
  }
  ExperimentConfig mixture() const {
    ExperimentConfig c;
    c.id = "mixture_sweep";
    c.kind = ExperimentKind::MixtureSweep;
    c.family = CopulaFamily::Mixture;
    c.preset = "linear_risk";
    c.taus = {0.4, 0.8};
    c.seeds = {0, 1, 2, 3, 4};
    c.train.learn_kappa = false;
    return c;
  }
  ExperimentConfig semi() const {
    ExperimentConfig c;
    c.id = "semi_synthetic";
    c.kind = ExperimentKind::SemiSynthetic;
    c.family = CopulaFamily::Clayton;
    c.preset = "synthetic_regression";
    c.taus = {0.8};
    c.seeds = {0, 1, 2, 3, 4};
    return c;
  }

  const ExperimentOutcome& run(const ExperimentConfig& cfg, const std::string& tag = "first") {
    const std::string key = cfg.id + "/" + tag;
    auto it = outcomes.find(key);
    if (it != outcomes.end()) return it->second;
    const auto start = std::chrono::steady_clock::now();
    ExperimentOutcome o = run_experiment(cfg, workers, work / tag / cfg.id);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "  ran " << key << ": " << o.results.size() << " arms, " << o.failures.size()
              << " failures, " << fmt(secs) << " s\n";
    return outcomes.emplace(key, std::move(o)).first->second;
  }
};

std::string failures_note(const ExperimentOutcome& o) {
  return o.failures.empty() ? "" : "; " + std::to_string(o.failures.size()) + " failed arms";
}

Verdict figure4_left(Experiments& ex) {
  const auto& o = ex.run(ex.sweep());
  const auto l1 = collect(o, [](const EvaluationReport& r) { return r.survival_l1_event; });
  bool ok = o.failures.empty();
  std::string detail;
  double gap02 = 0, gap08 = 0;
  for (double tau : {0.2, 0.4, 0.6, 0.8}) {
    const double c = mean_of(l1, tau, "copula"), i = mean_of(l1, tau, "independence");
    ok = ok && c < i;
    if (tau == 0.2) gap02 = i - c;
    if (tau == 0.8) gap08 = i - c;
    detail += "tau " + fmt(tau) + ": copula " + fmt(c) + " vs indep " + fmt(i) + "; ";
  }
  ok = ok && gap08 > gap02;
  return {ok, detail + "gap(0.8) " + fmt(gap08) + " vs gap(0.2) " + fmt(gap02) + failures_note(o)};
}

Verdict figure4_right(Experiments& ex) {
  const auto& o = ex.run(ex.sweep());
  const auto tau_hat = collect(o, [](const EvaluationReport& r) { return r.tau_hat; });
  bool ok = o.failures.empty();
  std::string detail;
  for (double tau : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    const double m = mean_of(tau_hat, tau, "copula");
    ok = ok && (tau == 0.0 ? m < 0.05 : std::abs(m - tau) <= 0.1);
    detail += "tau* " + fmt(tau) + " -> " + fmt(m) + "; ";
  }
  return {ok, detail + "mean over 5 seeds" + failures_note(o)};
}

Verdict table1_trend(Experiments& ex) {
  const auto& o = ex.run(ex.metric_bias());
  std::map<double, std::vector<double>> dc, db;
  for (const auto& r : o.metric_bias) {
    dc[r.tau].push_back(r.c_index_abs_diff());
    db[r.tau].push_back(r.brier_abs_diff());
  }
  const double c02 = stats::mean(dc[0.2]), c08 = stats::mean(dc[0.8]);
  const double b02 = stats::mean(db[0.2]), b08 = stats::mean(db[0.8]);
  const double c001 = stats::mean(dc[0.01]);
  return {o.failures.empty() && c08 > c02 && b08 > b02,
          "c-index |diff| tau 0.01 " + fmt(c001) + ", 0.2 " + fmt(c02) + ", 0.8 " + fmt(c08) +
              "; Brier |diff| 0.2 " + fmt(b02) + ", 0.8 " + fmt(b08) + failures_note(o)};
}

Verdict figure5(Experiments& ex) {
  const auto& o = ex.run(ex.mixture());
  const auto l1 = collect(o, [](const EvaluationReport& r) { return r.survival_l1_event; });
  bool ok = o.failures.empty();
  std::string detail;
  for (double tau : {0.4, 0.8}) {
    const double c = mean_of(l1, tau, "copula"), i = mean_of(l1, tau, "independence");
    ok = ok && c < i;
    detail += "tau " + fmt(tau) + ": mixture " + fmt(c) + " vs indep " + fmt(i) + "; ";
  }
  return {ok, detail + "kappa fixed at 0.5" + failures_note(o)};
}

Verdict semi_synthetic(Experiments& ex) {
  const auto& o = ex.run(ex.semi());
  const auto r2 = collect(o, [](const EvaluationReport& r) { return r.r_squared; });
  const double c = mean_of(r2, 0.8, "copula"), i = mean_of(r2, 0.8, "independence"),
               u = mean_of(r2, 0.8, "uncensored");
  return {o.failures.empty() && c > i && c < u && i < u,
          "R^2 copula " + fmt(c) + ", independence " + fmt(i) + ", no censoring " + fmt(u) +
              failures_note(o)};
}

Verdict determinism(Experiments& ex) {
  std::vector<std::string> mismatched;
  std::size_t compared = 0;
  for (const auto& cfg : {ex.sweep(), ex.metric_bias(), ex.mixture(), ex.semi()}) {
    ex.run(cfg, "first");
    ex.run(cfg, "rerun");
    for (const char* file : {"results.csv", "summary.csv", "metric_bias.csv"}) {
      const fs::path a = ex.work / "first" / cfg.id / file, b = ex.work / "rerun" / cfg.id / file;
      if (!fs::exists(a) && !fs::exists(b)) continue;
      ++compared;
      if (!fs::exists(a) || !fs::exists(b) || read_text_file(a) != read_text_file(b)) {
        mismatched.push_back(cfg.id + "/" + file);
      }
    }
  }
  std::string detail = std::to_string(compared) + " result files compared";
  for (const auto& m : mismatched) detail += "; differs: " + m;
  return {mismatched.empty() && compared > 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string report_path, work_dir = "acceptance_runs";
  std::vector<int> only;
  unsigned workers = 0;
  app.add_option("--report", report_path, "also write the verdict lines to this file");
  app.add_option("--work", work_dir, "directory for experiment outputs");
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  app.add_option("--workers", workers, "experiment worker threads (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  Experiments ex{fs::path(work_dir), workers, {}};
  fs::remove_all(ex.work);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"copula axioms", copula_axioms},
      {"copula partial derivatives", derivative_oracle},
      {"sampler Kendall tau", sampler_consistency},
      {"likelihood gradient", gradient_correctness},
      {"independence reduction", independence_reduction},
      {"synthetic sweep Survival-l1 ordering", [&] { return figure4_left(ex); }},
      {"synthetic sweep tau recovery", [&] { return figure4_right(ex); }},
      {"metric bias trend", [&] { return table1_trend(ex); }},
      {"mixture sweep Survival-l1 ordering", [&] { return figure5(ex); }},
      {"semi-synthetic R^2 ordering", [&] { return semi_synthetic(ex); }},
      {"Survival-l1 discretization", survival_l1_oracle},
      {"determinism of experiment results", [&] { return determinism(ex); }},
  };

  std::ostringstream report;
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const std::string line = std::string(v.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(id) +
                             " (" + criteria[k].first + "): " + v.detail;
    std::cout << line << std::endl;
    report << line << '\n';
    failed += v.pass ? 0 : 1;
  }
  if (!report_path.empty()) write_text_file(report_path, report.str());
  return failed == 0 ? 0 : 1;
}
