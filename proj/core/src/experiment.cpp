#include "copsurv/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "copsurv/error.hpp"
#include "copsurv/likelihood.hpp"
#include "copsurv/metrics.hpp"
#include "copsurv/rng.hpp"
#include "copsurv/stats.hpp"
#include "json_io.hpp"

namespace copsurv {

using detail::Json;

namespace {

constexpr std::uint64_t kMixtureTauSeed = 20240917;
constexpr std::size_t kMixtureTauSamples = 100000;

template <typename T>
std::optional<T> opt_field(const Json& j, const char* name) {
  if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
  return j.at(name).get<T>();
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string opt_csv(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

double fitted_tau(const CopulaSpec& spec) {
  if (spec.family == CopulaFamily::Mixture) {
    return kendall_tau_monte_carlo(spec, kMixtureTauSamples, kMixtureTauSeed);
  }
  return theta_to_tau(spec);
}

EvaluationReport evaluate(const Checkpoint& checkpoint, const SurvivalDataset& data,
                          const std::optional<GroundTruth>& truth) {
  if (data.empty()) throw ValidationError("evaluation dataset is empty");
  if (checkpoint.event_model.input_dim() != data.dim()) {
    throw ShapeError("checkpoint input dimension " +
                     std::to_string(checkpoint.event_model.input_dim()) +
                     " does not match dataset dimension " + std::to_string(data.dim()));
  }
  EvaluationReport r;
  r.family = std::string(to_string(checkpoint.copula.family));
  r.n_records = data.size();
  try {
    r.c_index = concordance_index(checkpoint.event_model, data);
  } catch (const UndefinedMetric&) {
  }
  const double eval_time = stats::median(data.times());
  r.brier_eval_time = eval_time;
  try {
    r.brier = brier_score(checkpoint.event_model, data, eval_time);
  } catch (const UndefinedMetric&) {
  }
  r.tau_hat = fitted_tau(checkpoint.copula);
  if (truth) {
    if (truth->event_model.input_dim() != data.dim()) {
      throw ShapeError("ground-truth dimension does not match the dataset");
    }
    r.survival_l1_event = survival_l1(truth->event_model, checkpoint.event_model, data);
    r.survival_l1_censor = survival_l1(truth->censor_model, checkpoint.censor_model, data);
  }
  return r;
}

namespace {

Json report_json(const EvaluationReport& r) {
  Json j;
  j["family"] = r.family;
  j["n_records"] = r.n_records;
  j["survival_l1_event"] = opt_json(r.survival_l1_event);
  j["survival_l1_censor"] = opt_json(r.survival_l1_censor);
  j["c_index"] = opt_json(r.c_index);
  j["brier"] = opt_json(r.brier);
  j["brier_eval_time"] = opt_json(r.brier_eval_time);
  j["r_squared"] = opt_json(r.r_squared);
  j["tau_hat"] = opt_json(r.tau_hat);
  // Absent metrics are dropped rather than emitted as null.
  for (auto it = j.begin(); it != j.end();) {
    if (it->is_null()) {
      it = j.erase(it);
    } else {
      ++it;
    }
  }
  return j;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) { return detail::dump(report_json(report)); }

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::SyntheticSweep: return "synthetic_sweep";
    case ExperimentKind::MixtureSweep: return "mixture_sweep";
    case ExperimentKind::MetricBias: return "metric_bias";
    case ExperimentKind::SemiSynthetic: return "semi_synthetic";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  if (name == "synthetic_sweep") return ExperimentKind::SyntheticSweep;
  if (name == "mixture_sweep") return ExperimentKind::MixtureSweep;
  if (name == "metric_bias") return ExperimentKind::MetricBias;
  if (name == "semi_synthetic") return ExperimentKind::SemiSynthetic;
  throw ValidationError("unknown experiment kind '" + std::string(name) + "'");
}

TrainConfig ExperimentConfig::desk_train_config() {
  TrainConfig t;
  t.patience = 300;
  t.max_epochs = 15000;
  return t;
}

RiskKind ExperimentConfig::model_risk() const {
  if (risk) return *risk;
  return preset == "nonlinear_risk" ? RiskKind::Mlp : RiskKind::Linear;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ValidationError("experiment config field '" + field + "' " + why);
  };
  if (id.empty()) fail("id", "must be non-empty");
  if (taus.empty()) fail("taus", "must list at least one value");
  for (double t : taus) {
    if (!(t >= 0.0 && t < 1.0)) fail("taus", "values must lie in [0, 1)");
  }
  if (seeds.empty()) fail("seeds", "must list at least one seed");
  if (kind == ExperimentKind::SyntheticSweep || kind == ExperimentKind::MixtureSweep) {
    if (preset != "linear_risk" && preset != "nonlinear_risk") {
      fail("preset", "must be linear_risk or nonlinear_risk for synthetic sweeps");
    }
  }
  if (kind == ExperimentKind::SyntheticSweep && family == CopulaFamily::Independence) {
    fail("family", "must be a dependent family (the independence arm is always run)");
  }
  if (kind == ExperimentKind::SemiSynthetic && family == CopulaFamily::Mixture) {
    fail("family", "semi-synthetic censoring supports Clayton or Frank");
  }
  if (kind != ExperimentKind::MetricBias &&
      (n_train < 2 || n_val < 1 || n_test < 1)) {
    fail("n_train", "sample sizes must be positive");
  }
  if (kind == ExperimentKind::MetricBias && metric_bias_n < 2) fail("metric_bias_n", "must be >= 2");
  if (regression_dim == 0) fail("regression_dim", "must be >= 1");
  train.validate();
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["id"] = cfg.id;
  j["kind"] = std::string(to_string(cfg.kind));
  j["family"] = std::string(to_string(cfg.family));
  j["taus"] = cfg.taus;
  j["preset"] = cfg.preset;
  j["target"] = cfg.target;
  j["shift_zeros"] = cfg.shift_zeros;
  j["n_train"] = cfg.n_train;
  j["n_val"] = cfg.n_val;
  j["n_test"] = cfg.n_test;
  j["regression_dim"] = cfg.regression_dim;
  j["risk"] = cfg.risk ? Json(std::string(to_string(*cfg.risk))) : Json(nullptr);
  j["train"] = detail::to_json(cfg.train);
  j["seeds"] = cfg.seeds;
  j["metric_bias_n"] = cfg.metric_bias_n;
  j["timing"] = cfg.timing;
  return detail::dump(j);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  const Json j = detail::parse_json(text, "experiment config");
  if (!j.is_object()) throw ValidationError("experiment config must be a JSON object");
  static const char* known[] = {"id",      "kind",    "family", "taus",          "preset",
                                "target",  "shift_zeros", "n_train", "n_val",    "n_test",
                                "regression_dim", "risk", "train", "seeds",     "metric_bias_n",
                                "timing"};
  for (const auto& item : j.items()) {
    if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known)) {
      throw ValidationError("experiment config: unknown field '" + item.key() + "'");
    }
  }
  ExperimentConfig cfg;
  auto wrap = [](const char* name, auto&& fn) {
    try {
      fn();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError(std::string("experiment config field '") + name + "' has the wrong type");
    }
  };
  wrap("id", [&] { if (j.contains("id")) cfg.id = j.at("id").get<std::string>(); });
  wrap("kind", [&] {
    if (j.contains("kind")) cfg.kind = parse_experiment_kind(j.at("kind").get<std::string>());
  });
  wrap("family", [&] {
    if (j.contains("family")) cfg.family = parse_copula_family(j.at("family").get<std::string>());
  });
  wrap("taus", [&] { if (j.contains("taus")) cfg.taus = j.at("taus").get<std::vector<double>>(); });
  wrap("preset", [&] { if (j.contains("preset")) cfg.preset = j.at("preset").get<std::string>(); });
  wrap("target", [&] { if (j.contains("target")) cfg.target = j.at("target").get<std::string>(); });
  wrap("shift_zeros", [&] { if (j.contains("shift_zeros")) cfg.shift_zeros = j.at("shift_zeros").get<bool>(); });
  auto count = [&](const char* name, std::size_t& out) {
    wrap(name, [&] {
      if (!j.contains(name)) return;
      if (!j.at(name).is_number_unsigned()) throw nlohmann::json::type_error::create(302, "", nullptr);
      out = j.at(name).get<std::size_t>();
    });
  };
  count("n_train", cfg.n_train);
  count("n_val", cfg.n_val);
  count("n_test", cfg.n_test);
  count("regression_dim", cfg.regression_dim);
  count("metric_bias_n", cfg.metric_bias_n);
  wrap("risk", [&] {
    if (auto r = opt_field<std::string>(j, "risk")) cfg.risk = parse_risk_kind(*r);
  });
  if (j.contains("train")) cfg.train = detail::train_config_from(j.at("train"));
  wrap("seeds", [&] {
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  });
  wrap("timing", [&] { if (j.contains("timing")) cfg.timing = j.at("timing").get<bool>(); });
  cfg.validate();
  return cfg;
}

namespace {

struct Unit {
  std::size_t tau_index;
  double tau;
  std::uint64_t seed;
};

struct UnitOutput {
  std::vector<ArmResult> results;
  std::vector<ArmFailure> failures;
  std::vector<MetricBiasRow> metric_bias;
};

struct Splits {
  SurvivalDataset train, val, test;
};

Splits split_sequential(const SurvivalDataset& data, std::size_t n_train, std::size_t n_val) {
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto range = [&](std::size_t lo, std::size_t hi) {
    return data.subset(std::span<const std::size_t>(idx).subspan(lo, hi - lo));
  };
  return {range(0, n_train), range(n_train, n_train + n_val), range(n_train + n_val, data.size())};
}

using Clock = std::chrono::steady_clock;

class ArmRunner {
 public:
  ArmRunner(const ExperimentConfig& cfg, const Unit& unit, UnitOutput& out)
      : cfg_(cfg), unit_(unit), out_(out) {}

  template <typename Fn>
  void run(const std::string& model, const std::string& family, Fn&& fn) {
    const auto start = Clock::now();
    try {
      ArmResult r{unit_.tau, unit_.seed, model, family, fn(), std::nullopt};
      if (cfg_.timing) {
        r.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
      }
      out_.results.push_back(std::move(r));
    } catch (const std::exception& e) {
      out_.failures.push_back({unit_.tau, unit_.seed, model, e.what()});
    }
  }

  void fail_all(const std::vector<std::string>& models, const std::string& error) {
    for (const auto& m : models) out_.failures.push_back({unit_.tau, unit_.seed, m, error});
  }

 private:
  const ExperimentConfig& cfg_;
  const Unit& unit_;
  UnitOutput& out_;
};

TrainConfig unit_train_config(const ExperimentConfig& cfg, const Unit& unit) {
  TrainConfig t = cfg.train;
  t.seed = Rng::derive_seed(unit.seed, 7);
  return t;
}

void run_synthetic_unit(const ExperimentConfig& cfg, const Unit& unit, UnitOutput& out) {
  ArmRunner arms(cfg, unit, out);
  const CopulaFamily data_family =
      cfg.kind == ExperimentKind::MixtureSweep ? CopulaFamily::Mixture : cfg.family;
  SyntheticData gen{SurvivalDataset(), WeibullCoxModel(1, 1, RiskFunction::linear({0.0})),
                    WeibullCoxModel(1, 1, RiskFunction::linear({0.0})), {}, {}};
  try {
    SyntheticGenConfig g = preset_by_name(cfg.preset, unit.seed);
    g.n = cfg.n_train + cfg.n_val + cfg.n_test;
    g.copula = copula_from_tau(data_family, unit.tau);
    g.seed = unit.seed;
    gen = generate_synthetic(g);
  } catch (const std::exception& e) {
    arms.fail_all({"copula", "independence"}, e.what());
    return;
  }
  const Splits s = split_sequential(gen.data, cfg.n_train, cfg.n_val);
  const GroundTruth truth{gen.event_truth, gen.censor_truth};
  const TrainConfig tc = unit_train_config(cfg, unit);
  const RiskKind risk = cfg.model_risk();
  const auto fit_and_eval = [&](CopulaFamily family) {
    const FittedJointModel m = fit(s.train, s.val, risk, risk, family, tc);
    return evaluate({m.event_model, m.censor_model, m.copula}, s.test, truth);
  };
  arms.run("copula", std::string(to_string(data_family)), [&] { return fit_and_eval(data_family); });
  arms.run("independence", "Independence", [&] { return fit_and_eval(CopulaFamily::Independence); });
}

void run_semi_synthetic_unit(const ExperimentConfig& cfg, const Unit& unit,
                             const std::optional<RegressionDataset>& csv_data, UnitOutput& out) {
  ArmRunner arms(cfg, unit, out);
  const std::vector<std::string> models{"copula", "independence", "uncensored"};
  RegressionDataset reg;
  CensoredRegression cens{SurvivalDataset(), WeibullCoxModel(1, 1, RiskFunction::linear({0.0})),
                          WeibullCoxModel(1, 1, RiskFunction::linear({0.0})), {}, {}, 0.0, 0.0};
  try {
    reg = csv_data ? *csv_data
                   : synthetic_regression(cfg.n_train + cfg.n_val + cfg.n_test, cfg.regression_dim,
                                          Rng::derive_seed(unit.seed, 10));
    CensorOptions opts;
    opts.shift_zeros = cfg.shift_zeros;
    opts.fit = cfg.train;
    cens = censor_regression(reg, copula_from_tau(cfg.family, unit.tau),
                             Rng::derive_seed(unit.seed, 11), opts);
  } catch (const std::exception& e) {
    arms.fail_all(models, e.what());
    return;
  }
  const std::size_t n = cens.data.size();
  std::size_t n_train, n_val;
  if (csv_data) {
    n_train = static_cast<std::size_t>(0.70 * static_cast<double>(n));
    n_val = static_cast<std::size_t>(0.15 * static_cast<double>(n));
  } else {
    n_train = cfg.n_train;
    n_val = cfg.n_val;
  }
  if (n_train < 2 || n_val < 1 || n_train + n_val >= n) {
    arms.fail_all(models, "regression data too small to split");
    return;
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng split_rng(Rng::derive_seed(unit.seed, 12));
  split_rng.shuffle(std::span<std::size_t>(idx));
  const std::span<const std::size_t> all(idx);
  const auto tr = all.subspan(0, n_train);
  const auto va = all.subspan(n_train, n_val);
  const auto te = all.subspan(n_train + n_val);
  const SurvivalDataset train = cens.data.subset(tr);
  const SurvivalDataset val = cens.data.subset(va);
  const SurvivalDataset test = cens.data.subset(te);

  auto regression_of = [&](std::span<const std::size_t> rows) {
    RegressionDataset r;
    r.dim = cens.data.dim();
    for (std::size_t i : rows) {
      const auto x = cens.data.x(i);
      r.x.insert(r.x.end(), x.begin(), x.end());
      r.y.push_back(cens.y[i]);
    }
    return r;
  };
  const RegressionDataset test_reg = regression_of(te);
  auto uncensored_of = [&](std::span<const std::size_t> rows) {
    const RegressionDataset r = regression_of(rows);
    return SurvivalDataset(r.dim, r.x, r.y, std::vector<int>(r.y.size(), 1));
  };
  const GroundTruth truth{cens.event_model, cens.censor_model};
  const TrainConfig tc = unit_train_config(cfg, unit);

  const auto fit_and_eval = [&](CopulaFamily family) {
    const FittedJointModel m = fit(train, val, RiskKind::Linear, RiskKind::Linear, family, tc);
    EvaluationReport r = evaluate({m.event_model, m.censor_model, m.copula}, test, truth);
    r.r_squared = r_squared(m.event_model, test_reg);
    return r;
  };
  arms.run("copula", std::string(to_string(cfg.family)), [&] { return fit_and_eval(cfg.family); });
  arms.run("independence", "Independence",
           [&] { return fit_and_eval(CopulaFamily::Independence); });
  arms.run("uncensored", "none", [&] {
    const FittedMarginal m =
        fit_marginal(uncensored_of(tr), uncensored_of(va), RiskKind::Linear, tc, 1);
    EvaluationReport r;
    r.family = "none";
    r.n_records = test_reg.size();
    r.survival_l1_event = survival_l1(truth.event_model, m.model, test);
    r.c_index = concordance_index(m.model, uncensored_of(te));
    r.r_squared = r_squared(m.model, test_reg);
    return r;
  });
}

void run_metric_bias_unit(const ExperimentConfig& cfg, const Unit& unit, UnitOutput& out) {
  ArmRunner arms(cfg, unit, out);
  std::vector<MetricBiasRow> rows;
  try {
    const double tau[] = {unit.tau};
    rows = metric_bias_experiment(tau, unit.seed, cfg.metric_bias_n, cfg.family);
  } catch (const std::exception& e) {
    arms.fail_all({"uncensored", "censored"}, e.what());
    return;
  }
  const MetricBiasRow& row = rows.front();
  out.metric_bias.push_back(row);
  const std::string family(to_string(unit.tau == 0.0 ? CopulaFamily::Independence : cfg.family));
  arms.run("uncensored", family, [&] {
    EvaluationReport r;
    r.family = family;
    r.n_records = cfg.metric_bias_n;
    r.c_index = row.c_index_uncensored;
    r.brier = row.brier_uncensored;
    r.brier_eval_time = row.eval_time;
    return r;
  });
  arms.run("censored", family, [&] {
    EvaluationReport r;
    r.family = family;
    r.n_records = cfg.metric_bias_n;
    r.c_index = row.c_index_censored;
    r.brier = row.brier_censored;
    r.brier_eval_time = row.eval_time;
    return r;
  });
}

std::string arm_file_name(const ExperimentConfig& cfg, const ArmResult& r) {
  return cfg.id + "_tau" + format_double(r.tau_star) + "_seed" + std::to_string(r.seed) + "_" +
         r.model + ".json";
}

std::string arm_json(const ExperimentConfig& cfg, const ArmResult& r) {
  Json j;
  j["experiment_id"] = cfg.id;
  j["tau_star"] = r.tau_star;
  j["seed"] = r.seed;
  j["model"] = r.model;
  j["family"] = r.family;
  j["report"] = report_json(r.report);
  if (r.wall_time_s) j["wall_time_s"] = *r.wall_time_s;
  return detail::dump(j);
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, unsigned workers,
                                 const std::optional<std::filesystem::path>& out_dir) {
  cfg.validate();
  std::optional<RegressionDataset> csv_data;
  if (cfg.kind == ExperimentKind::SemiSynthetic && cfg.preset != "synthetic_regression") {
    csv_data = read_regression_csv(cfg.preset, cfg.target);
  }
  std::vector<Unit> units;
  for (std::size_t k = 0; k < cfg.taus.size(); ++k) {
    for (std::uint64_t seed : cfg.seeds) units.push_back({k, cfg.taus[k], seed});
  }
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(units.size()));

  std::vector<UnitOutput> outputs(units.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t u = next++; u < units.size(); u = next++) {
      switch (cfg.kind) {
        case ExperimentKind::SyntheticSweep:
        case ExperimentKind::MixtureSweep: run_synthetic_unit(cfg, units[u], outputs[u]); break;
        case ExperimentKind::SemiSynthetic:
          run_semi_synthetic_unit(cfg, units[u], csv_data, outputs[u]);
          break;
        case ExperimentKind::MetricBias: run_metric_bias_unit(cfg, units[u], outputs[u]); break;
      }
      if (out_dir) {
        for (const auto& r : outputs[u].results) {
          write_text_file(*out_dir / "arms" / arm_file_name(cfg, r), arm_json(cfg, r));
        }
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ExperimentOutcome outcome;
  for (auto& o : outputs) {
    for (auto& r : o.results) outcome.results.push_back(std::move(r));
    for (auto& f : o.failures) outcome.failures.push_back(std::move(f));
    for (auto& m : o.metric_bias) outcome.metric_bias.push_back(m);
  }
  if (out_dir) {
    write_text_file(*out_dir / "results.csv", results_csv(cfg, outcome));
    write_text_file(*out_dir / "summary.csv", summary_csv(outcome));
    Json failures = Json::array();
    for (const auto& f : outcome.failures) {
      failures.push_back({{"tau_star", f.tau_star},
                          {"seed", f.seed},
                          {"model", f.model},
                          {"error", f.error}});
    }
    write_text_file(*out_dir / "failures.json", detail::dump(failures));
    if (cfg.kind == ExperimentKind::MetricBias) {
      write_text_file(*out_dir / "metric_bias.csv", metric_bias_csv(outcome.metric_bias));
    }
    write_text_file(*out_dir / "config.json", experiment_config_to_json(cfg));
  }
  return outcome;
}

std::string results_csv(const ExperimentConfig& cfg, const ExperimentOutcome& outcome) {
  std::string out =
      "experiment_id,tau_star,seed,model,family,survival_l1_event,survival_l1_censor,tau_hat,"
      "c_index,brier,r_squared,wall_time_s\n";
  for (const auto& r : outcome.results) {
    out += cfg.id + "," + format_double(r.tau_star) + "," + std::to_string(r.seed) + "," +
           r.model + "," + r.family + "," + opt_csv(r.report.survival_l1_event) + "," +
           opt_csv(r.report.survival_l1_censor) + "," + opt_csv(r.report.tau_hat) + "," +
           opt_csv(r.report.c_index) + "," + opt_csv(r.report.brier) + "," +
           opt_csv(r.report.r_squared) + "," + opt_csv(r.wall_time_s) + "\n";
  }
  return out;
}

std::string summary_csv(const ExperimentOutcome& outcome) {
  using Key = std::pair<double, std::string>;
  struct Acc {
    std::map<std::string, std::vector<double>> values;
  };
  std::vector<Key> order;
  std::map<Key, Acc> groups;
  static const char* metrics[] = {"survival_l1_event", "survival_l1_censor", "tau_hat",
                                  "c_index",           "brier",              "r_squared"};
  for (const auto& r : outcome.results) {
    const Key key{r.tau_star, r.model};
    if (!groups.count(key)) order.push_back(key);
    Acc& acc = groups[key];
    const std::optional<double> vals[] = {r.report.survival_l1_event, r.report.survival_l1_censor,
                                          r.report.tau_hat,           r.report.c_index,
                                          r.report.brier,             r.report.r_squared};
    for (std::size_t m = 0; m < std::size(metrics); ++m) {
      if (vals[m]) acc.values[metrics[m]].push_back(*vals[m]);
    }
  }
  std::string out = "tau_star,model,metric,mean,std,count\n";
  for (const auto& key : order) {
    const Acc& acc = groups.at(key);
    for (const char* m : metrics) {
      const auto it = acc.values.find(m);
      if (it == acc.values.end()) continue;
      out += format_double(key.first) + "," + key.second + "," + m + "," +
             format_double(stats::mean(it->second)) + "," +
             format_double(stats::stddev(it->second)) + "," + std::to_string(it->second.size()) +
             "\n";
    }
  }
  return out;
}

std::string metric_bias_csv(const std::vector<MetricBiasRow>& rows) {
  std::string out =
      "seed,tau,c_index_uncensored,c_index_censored,c_index_abs_diff,brier_uncensored,"
      "brier_censored,brier_abs_diff,eval_time,censoring_fraction\n";
  for (const auto& r : rows) {
    out += std::to_string(r.seed) + "," + format_double(r.tau) + "," +
           format_double(r.c_index_uncensored) + "," + format_double(r.c_index_censored) + "," +
           format_double(r.c_index_abs_diff()) + "," + format_double(r.brier_uncensored) + "," +
           format_double(r.brier_censored) + "," + format_double(r.brier_abs_diff()) + "," +
           format_double(r.eval_time) + "," + format_double(r.censoring_fraction) + "\n";
  }
  return out;
}

}  // namespace copsurv
