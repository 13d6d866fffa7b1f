#include "copsurv/serialization.hpp"

#include <algorithm>
#include <cmath>

#include "copsurv/dataset.hpp"
#include "copsurv/error.hpp"
#include "json_io.hpp"

namespace copsurv {

namespace detail {

Json parse_json(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

const Json& field(const Json& j, const char* name, const char* context) {
  if (!j.is_object() || !j.contains(name)) {
    throw ValidationError(std::string(context) + ": missing field '" + name + "'");
  }
  return j.at(name);
}

double number_field(const Json& j, const char* name, const char* context) {
  const Json& v = field(j, name, context);
  if (!v.is_number()) {
    throw ValidationError(std::string(context) + ": field '" + name + "' must be a number");
  }
  return v.get<double>();
}

namespace {

template <typename T>
std::vector<T> array_field(const Json& j, const char* name, const char* context) {
  const Json& v = field(j, name, context);
  if (!v.is_array()) {
    throw ValidationError(std::string(context) + ": field '" + name + "' must be an array");
  }
  try {
    return v.get<std::vector<T>>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string(context) + ": field '" + name + "' has wrong element types");
  }
}

std::string string_field(const Json& j, const char* name, const char* context) {
  const Json& v = field(j, name, context);
  if (!v.is_string()) {
    throw ValidationError(std::string(context) + ": field '" + name + "' must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

Json to_json(const RiskFunction& risk) {
  Json j;
  j["kind"] = std::string(to_string(risk.kind()));
  j["widths"] = risk.widths();
  j["weights"] = std::vector<double>(risk.weights().begin(), risk.weights().end());
  j["biases"] = std::vector<double>(risk.biases().begin(), risk.biases().end());
  return j;
}

RiskFunction risk_from(const Json& j) {
  const char* ctx = "risk";
  try {
    return RiskFunction::from_parts(parse_risk_kind(string_field(j, "kind", ctx)),
                                    array_field<std::size_t>(j, "widths", ctx),
                                    array_field<double>(j, "weights", ctx),
                                    array_field<double>(j, "biases", ctx));
  } catch (const ShapeError& e) {
    throw ValidationError(std::string("risk: ") + e.what());
  }
}

Json to_json(const WeibullCoxModel& model) {
  Json j;
  j["kind"] = "weibull_cox";
  j["log_nu"] = model.log_nu();
  j["log_rho"] = model.log_rho();
  j["risk"] = to_json(model.risk());
  return j;
}

WeibullCoxModel model_from(const Json& j) {
  const char* ctx = "model";
  if (string_field(j, "kind", ctx) != "weibull_cox") {
    throw ValidationError("model: kind must be 'weibull_cox'");
  }
  return WeibullCoxModel::from_log(number_field(j, "log_nu", ctx), number_field(j, "log_rho", ctx),
                                   risk_from(field(j, "risk", ctx)));
}

Json to_json(const CopulaSpec& spec) {
  Json j;
  j["family"] = std::string(to_string(spec.family));
  switch (spec.family) {
    case CopulaFamily::Independence: break;
    case CopulaFamily::Clayton:
    case CopulaFamily::Frank: j["theta"] = spec.theta; break;
    case CopulaFamily::Mixture:
      j["theta_frank"] = spec.theta_frank;
      j["theta_clayton"] = spec.theta_clayton;
      j["kappa"] = spec.kappa;
      break;
  }
  return j;
}

CopulaSpec copula_from(const Json& j) {
  const char* ctx = "copula";
  CopulaSpec spec;
  try {
    switch (parse_copula_family(string_field(j, "family", ctx))) {
      case CopulaFamily::Independence: spec = CopulaSpec::independence(); break;
      case CopulaFamily::Clayton: spec = CopulaSpec::clayton(number_field(j, "theta", ctx)); break;
      case CopulaFamily::Frank: spec = CopulaSpec::frank(number_field(j, "theta", ctx)); break;
      case CopulaFamily::Mixture:
        spec = CopulaSpec::mixture(number_field(j, "theta_frank", ctx),
                                   number_field(j, "theta_clayton", ctx),
                                   number_field(j, "kappa", ctx));
        break;
    }
  } catch (const DomainError& e) {
    throw ValidationError(std::string("copula: ") + e.what());
  }
  return spec;
}

Json to_json(const TrainConfig& cfg) {
  Json j;
  j["learning_rate"] = cfg.learning_rate;
  j["max_epochs"] = cfg.max_epochs;
  j["grad_scale"] = cfg.grad_scale;
  j["clip_bound"] = cfg.clip_bound;
  j["theta_min"] = cfg.theta_min;
  j["l2_lambda"] = cfg.l2_lambda ? Json(*cfg.l2_lambda) : Json(nullptr);
  j["patience"] = cfg.patience;
  j["validation_fraction"] = cfg.validation_fraction;
  j["seed"] = cfg.seed;
  j["hidden"] = cfg.hidden;
  j["theta_init"] = cfg.theta_init;
  j["kappa_init"] = cfg.kappa_init;
  j["learn_kappa"] = cfg.learn_kappa;
  j["restore_best"] = cfg.restore_best;
  return j;
}

TrainConfig train_config_from(const Json& j) {
  if (!j.is_object()) throw ValidationError("train: expected an object");
  TrainConfig cfg;
  const char* ctx = "train";
  auto num = [&](const char* name, double& out) {
    if (j.contains(name)) out = number_field(j, name, ctx);
  };
  auto integer = [&](const char* name, auto& out) {
    if (!j.contains(name)) return;
    const Json& v = j.at(name);
    if (!v.is_number_integer()) {
      throw ValidationError(std::string("train: field '") + name + "' must be an integer");
    }
    out = v.get<std::remove_reference_t<decltype(out)>>();
  };
  auto boolean = [&](const char* name, bool& out) {
    if (!j.contains(name)) return;
    if (!j.at(name).is_boolean()) {
      throw ValidationError(std::string("train: field '") + name + "' must be a boolean");
    }
    out = j.at(name).get<bool>();
  };
  for (const auto& item : j.items()) {
    static const char* known[] = {"learning_rate", "max_epochs",  "grad_scale",  "clip_bound",
                                  "theta_min",     "l2_lambda",   "patience",    "validation_fraction",
                                  "seed",          "hidden",      "theta_init",  "kappa_init",
                                  "learn_kappa",   "restore_best"};
    if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known)) {
      throw ValidationError("train: unknown field '" + item.key() + "'");
    }
  }
  num("learning_rate", cfg.learning_rate);
  integer("max_epochs", cfg.max_epochs);
  num("grad_scale", cfg.grad_scale);
  num("clip_bound", cfg.clip_bound);
  num("theta_min", cfg.theta_min);
  if (j.contains("l2_lambda") && !j.at("l2_lambda").is_null()) {
    cfg.l2_lambda = number_field(j, "l2_lambda", ctx);
  }
  integer("patience", cfg.patience);
  num("validation_fraction", cfg.validation_fraction);
  integer("seed", cfg.seed);
  if (j.contains("hidden")) cfg.hidden = array_field<std::size_t>(j, "hidden", ctx);
  num("theta_init", cfg.theta_init);
  num("kappa_init", cfg.kappa_init);
  boolean("learn_kappa", cfg.learn_kappa);
  boolean("restore_best", cfg.restore_best);
  cfg.validate();
  return cfg;
}

Json to_json(const SyntheticGenConfig& cfg) {
  Json j;
  j["preset"] = cfg.preset;
  j["n"] = cfg.n;
  j["d"] = cfg.d;
  j["seed"] = cfg.seed;
  j["nu_E"] = cfg.nu_event;
  j["rho_E"] = cfg.rho_event;
  j["risk_E"] = to_json(cfg.risk_event);
  j["nu_C"] = cfg.nu_censor;
  j["rho_C"] = cfg.rho_censor;
  j["risk_C"] = to_json(cfg.risk_censor);
  j["copula"] = to_json(cfg.copula);
  if (cfg.copula.family == CopulaFamily::Clayton || cfg.copula.family == CopulaFamily::Frank) {
    j["tau"] = theta_to_tau(cfg.copula);
  } else if (cfg.copula.family == CopulaFamily::Independence) {
    j["tau"] = 0.0;
  }
  return j;
}

namespace {

// {"preset", "n", "seed", "family", "tau"}: a named preset coupled at tau.
SyntheticGenConfig generator_from_preset(const Json& j) {
  const char* ctx = "generator";
  for (const auto& item : j.items()) {
    static const char* known[] = {"preset", "n", "seed", "family", "tau"};
    if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known)) {
      throw ValidationError("generator: unknown field '" + item.key() + "'");
    }
  }
  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ValidationError("generator: seed must be an integer");
    seed = j.at("seed").get<std::uint64_t>();
  }
  SyntheticGenConfig cfg = preset_by_name(string_field(j, "preset", ctx), seed);
  if (j.contains("n")) {
    if (!j.at("n").is_number_unsigned() || j.at("n").get<std::size_t>() == 0) {
      throw ValidationError("generator: field 'n' must be a positive integer");
    }
    cfg.n = j.at("n").get<std::size_t>();
  }
  const CopulaFamily family =
      j.contains("family") ? parse_copula_family(string_field(j, "family", ctx)) : CopulaFamily::Clayton;
  const double tau = j.contains("tau") ? number_field(j, "tau", ctx) : 0.0;
  if (!(tau >= 0.0 && tau < 1.0)) throw ValidationError("generator: field 'tau' must lie in [0, 1)");
  if (family == CopulaFamily::Independence && tau != 0.0) {
    throw ValidationError("generator: field 'tau' must be 0 for the Independence family");
  }
  try {
    cfg.copula = copula_from_tau(family, tau);
  } catch (const DomainError& e) {
    throw ValidationError(std::string("generator: field 'tau': ") + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace

SyntheticGenConfig generator_from(const Json& j) {
  const char* ctx = "generator";
  if (!j.is_object()) throw ValidationError("generator: expected a JSON object");
  if (!j.contains("nu_E")) return generator_from_preset(j);
  SyntheticGenConfig cfg;
  cfg.preset = j.contains("preset") ? string_field(j, "preset", ctx) : "custom";
  const Json& n = field(j, "n", ctx);
  const Json& d = field(j, "d", ctx);
  if (!n.is_number_unsigned() || !d.is_number_unsigned()) {
    throw ValidationError("generator: n and d must be non-negative integers");
  }
  cfg.n = n.get<std::size_t>();
  cfg.d = d.get<std::size_t>();
  const Json& seed = field(j, "seed", ctx);
  if (!seed.is_number_unsigned()) throw ValidationError("generator: seed must be an integer");
  cfg.seed = seed.get<std::uint64_t>();
  cfg.nu_event = number_field(j, "nu_E", ctx);
  cfg.rho_event = number_field(j, "rho_E", ctx);
  cfg.risk_event = risk_from(field(j, "risk_E", ctx));
  cfg.nu_censor = number_field(j, "nu_C", ctx);
  cfg.rho_censor = number_field(j, "rho_C", ctx);
  cfg.risk_censor = risk_from(field(j, "risk_C", ctx));
  cfg.copula = copula_from(field(j, "copula", ctx));
  cfg.validate();
  return cfg;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

using detail::Json;

std::string model_to_json(const WeibullCoxModel& model) { return detail::dump(detail::to_json(model)); }

WeibullCoxModel model_from_json(const std::string& text) {
  return detail::model_from(detail::parse_json(text, "model"));
}

std::string copula_to_json(const CopulaSpec& spec) { return detail::dump(detail::to_json(spec)); }

CopulaSpec copula_from_json(const std::string& text) {
  return detail::copula_from(detail::parse_json(text, "copula"));
}

std::string checkpoint_to_json(const Checkpoint& checkpoint) {
  Json j;
  j["kind"] = "copula_survival";
  j["event_model"] = detail::to_json(checkpoint.event_model);
  j["censor_model"] = detail::to_json(checkpoint.censor_model);
  j["copula"] = detail::to_json(checkpoint.copula);
  return detail::dump(j);
}

Checkpoint checkpoint_from_json(const std::string& text) {
  const Json j = detail::parse_json(text, "checkpoint");
  const char* ctx = "checkpoint";
  const Json& kind = detail::field(j, "kind", ctx);
  if (!kind.is_string() || kind.get<std::string>() != "copula_survival") {
    throw ValidationError("checkpoint: kind must be 'copula_survival'");
  }
  Checkpoint c{detail::model_from(detail::field(j, "event_model", ctx)),
               detail::model_from(detail::field(j, "censor_model", ctx)),
               detail::copula_from(detail::field(j, "copula", ctx))};
  if (c.event_model.input_dim() != c.censor_model.input_dim()) {
    throw ValidationError("checkpoint: event and censor models disagree on input dimension");
  }
  return c;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(read_text_file(path));
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  write_text_file(path, checkpoint_to_json(checkpoint));
}

std::string generator_to_json(const SyntheticGenConfig& cfg) {
  return detail::dump(detail::to_json(cfg));
}

SyntheticGenConfig generator_from_json(const std::string& text) {
  return detail::generator_from(detail::parse_json(text, "generator"));
}

std::string train_config_to_json(const TrainConfig& cfg) { return detail::dump(detail::to_json(cfg)); }

TrainConfig train_config_from_json(const std::string& text) {
  return detail::train_config_from(detail::parse_json(text, "train"));
}

}  // namespace copsurv

namespace copsurv {

std::string censoring_metadata_json(const CensoredRegression& result, const CopulaSpec& spec) {
  Json j;
  j["copula"] = detail::to_json(spec);
  j["tau"] = spec.family == CopulaFamily::Mixture ? Json(nullptr)
             : Json(spec.family == CopulaFamily::Independence ? 0.0 : theta_to_tau(spec));
  j["nu_event"] = result.event_model.nu();
  j["rho_event"] = result.event_model.rho();
  j["nu_censor"] = result.censor_model.nu();
  j["rho_censor"] = result.censor_model.rho();
  j["event_model"] = detail::to_json(result.event_model);
  j["censor_model"] = detail::to_json(result.censor_model);
  j["censoring_fraction"] = result.censoring_fraction;
  j["n_records"] = result.data.size();
  j["shift"] = result.shift;
  j["standardization"] = {{"mean", result.standardization.mean},
                          {"scale", result.standardization.scale}};
  return detail::dump(j);
}

}  // namespace copsurv
