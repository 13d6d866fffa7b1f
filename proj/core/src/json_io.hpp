#pragma once

#include <string>

#include "copsurv/copula.hpp"
#include "copsurv/datagen.hpp"
#include "copsurv/serialization.hpp"
#include "copsurv/train.hpp"
#include "copsurv/weibull_cox.hpp"
#include "json.hpp"

namespace copsurv::detail {

using Json = nlohmann::ordered_json;

Json parse_json(const std::string& text, const char* what);

// Fetches a required field, raising ValidationError that names it.
const Json& field(const Json& j, const char* name, const char* context);
double number_field(const Json& j, const char* name, const char* context);

Json to_json(const RiskFunction& risk);
RiskFunction risk_from(const Json& j);
Json to_json(const WeibullCoxModel& model);
WeibullCoxModel model_from(const Json& j);
Json to_json(const CopulaSpec& spec);
CopulaSpec copula_from(const Json& j);
Json to_json(const TrainConfig& cfg);
TrainConfig train_config_from(const Json& j);
Json to_json(const SyntheticGenConfig& cfg);
SyntheticGenConfig generator_from(const Json& j);

// Two-space indent plus trailing newline.
std::string dump(const Json& j);

}  // namespace copsurv::detail
