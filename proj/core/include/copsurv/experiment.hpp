#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "copsurv/copula.hpp"
#include "copsurv/dataset.hpp"
#include "copsurv/datagen.hpp"
#include "copsurv/metrics.hpp"
#include "copsurv/serialization.hpp"
#include "copsurv/train.hpp"

namespace copsurv {

struct EvaluationReport {
  std::string family;
  std::size_t n_records = 0;
  std::optional<double> survival_l1_event;
  std::optional<double> survival_l1_censor;
  std::optional<double> c_index;
  std::optional<double> brier;
  std::optional<double> brier_eval_time;
  std::optional<double> r_squared;
  std::optional<double> tau_hat;

  bool operator==(const EvaluationReport&) const = default;
};

struct GroundTruth {
  WeibullCoxModel event_model;
  WeibullCoxModel censor_model;
};

// Kendall tau of a fitted copula; mixtures use a seeded Monte Carlo estimate.
double fitted_tau(const CopulaSpec& spec);

// c-index and Brier (at the median observed time) of the event model on
// `data`, recovered tau, and Survival-l1 of both margins when ground truth
// is given.
EvaluationReport evaluate(const Checkpoint& checkpoint, const SurvivalDataset& data,
                          const std::optional<GroundTruth>& truth = std::nullopt);

std::string report_to_json(const EvaluationReport& report);

enum class ExperimentKind { SyntheticSweep, MixtureSweep, MetricBias, SemiSynthetic };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentConfig {
  std::string id = "experiment";
  ExperimentKind kind = ExperimentKind::SyntheticSweep;
  CopulaFamily family = CopulaFamily::Clayton;
  std::vector<double> taus{0.01, 0.2, 0.4, 0.6, 0.8};
  // Synthetic kinds: "linear_risk" | "nonlinear_risk". Semi-synthetic: a
  // regression CSV path, or "synthetic_regression" for the built-in stand-in.
  std::string preset = "linear_risk";
  std::string target;  // regression target column; empty selects the last
  bool shift_zeros = false;
  std::size_t n_train = 5000;
  std::size_t n_val = 2000;
  std::size_t n_test = 2000;
  std::size_t regression_dim = 6;  // stand-in only
  // Unset: linear for linear_risk and semi-synthetic, MLP for nonlinear_risk.
  std::optional<RiskKind> risk;
  TrainConfig train = desk_train_config();
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::size_t metric_bias_n = 10000;
  // Record wall-clock seconds per arm (makes results.csv non-reproducible).
  bool timing = false;

  static TrainConfig desk_train_config();
  RiskKind model_risk() const;
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

std::string experiment_config_to_json(const ExperimentConfig& cfg);
// Throws ValidationError naming the offending field.
ExperimentConfig experiment_config_from_json(const std::string& text);

struct ArmResult {
  double tau_star = 0.0;
  std::uint64_t seed = 0;
  std::string model;  // copula | independence | uncensored | censored
  std::string family;
  EvaluationReport report;
  std::optional<double> wall_time_s;
};

struct ArmFailure {
  double tau_star = 0.0;
  std::uint64_t seed = 0;
  std::string model;
  std::string error;
};

struct ExperimentOutcome {
  std::vector<ArmResult> results;  // deterministic order: tau, seed, model
  std::vector<ArmFailure> failures;
  std::vector<MetricBiasRow> metric_bias;  // metric_bias kind only
};

// Runs every (tau, seed) unit on a pool of `workers` threads (0 selects the
// hardware concurrency) and, when out_dir is given, writes
//   arms/<...>.json, results.csv, summary.csv, failures.json
// plus metric_bias.csv for that kind.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, unsigned workers,
                                 const std::optional<std::filesystem::path>& out_dir);

std::string results_csv(const ExperimentConfig& cfg, const ExperimentOutcome& outcome);
// Mean and sample std of each metric per (tau_star, model).
std::string summary_csv(const ExperimentOutcome& outcome);
std::string metric_bias_csv(const std::vector<MetricBiasRow>& rows);

}  // namespace copsurv
