#pragma once

#include <filesystem>
#include <string>

#include "copsurv/copula.hpp"
#include "copsurv/datagen.hpp"
#include "copsurv/train.hpp"
#include "copsurv/weibull_cox.hpp"

namespace copsurv {

// Event and censor marginals plus their copula.
struct Checkpoint {
  WeibullCoxModel event_model;
  WeibullCoxModel censor_model;
  CopulaSpec copula;

  bool operator==(const Checkpoint&) const = default;
};

// {"kind": "weibull_cox", "log_nu", "log_rho",
//  "risk": {"kind", "widths", "weights", "biases"}}
std::string model_to_json(const WeibullCoxModel& model);
WeibullCoxModel model_from_json(const std::string& text);

// {"family", "theta" | "theta_frank", "theta_clayton", "kappa"}
std::string copula_to_json(const CopulaSpec& spec);
CopulaSpec copula_from_json(const std::string& text);

// {"kind": "copula_survival", "event_model", "censor_model", "copula"}
std::string checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const std::string& text);
Checkpoint load_checkpoint(const std::filesystem::path& path);
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);

// Ground-truth sidecar of a synthetic dataset; echoes nu_E, rho_E, nu_C, rho_C.
std::string generator_to_json(const SyntheticGenConfig& cfg);
// Accepts the sidecar form or {"preset", "n", "seed", "family", "tau"}.
SyntheticGenConfig generator_from_json(const std::string& text);

// Fitted Weibull parameters, censoring fraction and standardization of an
// artificially censored regression dataset.
std::string censoring_metadata_json(const CensoredRegression& result, const CopulaSpec& spec);

std::string train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const std::string& text);

}  // namespace copsurv
