// copsurv: generate | censor | train | evaluate | experiment

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "copsurv/copula.hpp"
#include "copsurv/dataset.hpp"
#include "copsurv/datagen.hpp"
#include "copsurv/error.hpp"
#include "copsurv/experiment.hpp"
#include "copsurv/serialization.hpp"
#include "copsurv/train.hpp"

namespace fs = std::filesystem;
using namespace copsurv;

namespace {

void check_tau(const std::optional<double>& tau) {
  if (tau && !(*tau >= 0.0 && *tau < 1.0)) {
    throw ValidationError("field 'tau' must lie in [0, 1), got " + format_double(*tau));
  }
}

// data.csv -> data<suffix>
fs::path sibling(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out.replace_extension();
  out += suffix;
  return out;
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned workers = 0;

  // generate
  std::string preset;
  std::optional<double> tau;
  std::string family;
  std::optional<std::size_t> n;

  // censor
  std::string input;
  std::string target;
  bool shift_zeros = false;

  // train
  std::string data;
  std::string copula = "clayton";
  std::string risk = "linear";
  std::optional<double> lr;
  std::optional<int> epochs;
  std::optional<int> patience;
  std::optional<double> l2;
  std::optional<double> theta_init;

  // evaluate
  std::string checkpoint;
  std::string truth;
  bool require_l1 = false;
};

void cmd_generate(const Options& o) {
  check_tau(o.tau);
  if (!o.preset.empty() && !o.config.empty()) {
    throw ValidationError("--preset and --config are mutually exclusive");
  }
  SyntheticGenConfig cfg = o.config.empty()
                               ? preset_by_name(o.preset.empty() ? "linear_risk" : o.preset, 0)
                               : generator_from_json(read_text_file(o.config));
  if (o.seed) {
    if (cfg.preset != "custom") {
      // Preset coefficients are drawn from the seed.
      SyntheticGenConfig reseeded = preset_by_name(cfg.preset, *o.seed);
      reseeded.n = cfg.n;
      reseeded.copula = cfg.copula;
      cfg = std::move(reseeded);
    }
    cfg.seed = *o.seed;
  }
  if (o.n) cfg.n = *o.n;
  if (o.tau || !o.family.empty()) {
    const CopulaFamily fam = o.family.empty() ? CopulaFamily::Clayton : parse_copula_family(o.family);
    cfg.copula = copula_from_tau(fam, o.tau.value_or(0.0));
  }
  const SyntheticData gen = generate_synthetic(cfg);
  const fs::path out = o.out;
  write_survival_csv(gen.data, out);
  write_text_file(sibling(out, ".truth.json"), generator_to_json(cfg));
  write_latent_csv(gen.latent, sibling(out, ".latent.csv"));
  std::cout << "wrote " << gen.data.size() << " records to " << out.string() << " (event fraction "
            << format_double(gen.data.event_fraction()) << ")\n";
}

void cmd_censor(const Options& o) {
  check_tau(o.tau);
  RegressionDataset reg = read_regression_csv(o.input, o.target);
  const CopulaFamily fam = parse_copula_family(o.family.empty() ? "clayton" : o.family);
  const CopulaSpec spec = copula_from_tau(fam, o.tau.value_or(0.0));
  CensorOptions opts;
  opts.shift_zeros = o.shift_zeros;
  if (!o.config.empty()) opts.fit = train_config_from_json(read_text_file(o.config));
  const CensoredRegression res = censor_regression(std::move(reg), spec, o.seed.value_or(0), opts);
  write_survival_csv(res.data, o.out);
  write_text_file(sibling(o.out, ".meta.json"), censoring_metadata_json(res, spec));
  std::cout << "censoring fraction " << format_double(res.censoring_fraction) << "\n";
}

void cmd_train(const Options& o) {
  const SurvivalDataset data = read_survival_csv(o.data);
  TrainConfig cfg;
  if (!o.config.empty()) cfg = train_config_from_json(read_text_file(o.config));
  if (o.seed) cfg.seed = *o.seed;
  if (o.lr) cfg.learning_rate = *o.lr;
  if (o.epochs) cfg.max_epochs = *o.epochs;
  if (o.patience) cfg.patience = *o.patience;
  if (o.l2) cfg.l2_lambda = *o.l2;
  if (o.theta_init) cfg.theta_init = *o.theta_init;
  const CopulaFamily fam = parse_copula_family(o.copula);
  const RiskKind risk = parse_risk_kind(o.risk);
  const FittedJointModel m = [&] {
    try {
      return fit(data, risk, risk, fam, cfg);
    } catch (const TrainingFailure& e) {
      std::cerr << "copsurv train: last finite state at epoch " << e.epoch() << " ("
                << e.last_state().trace.size() << " trace rows)\n";
      throw;
    }
  }();
  save_checkpoint({m.event_model, m.censor_model, m.copula}, o.out);
  write_text_file(sibling(o.out, ".trace.csv"), trace_csv(m.trace, fam));
  std::cout << "best_epoch " << m.best_epoch << "\n";
  std::cout << "val_negloglik " << format_double(m.best_val_negloglik) << "\n";
  std::cout << "tau_hat " << format_double(fitted_tau(m.copula)) << "\n";
}

void cmd_evaluate(const Options& o) {
  const Checkpoint ck = load_checkpoint(o.checkpoint);
  const SurvivalDataset data = read_survival_csv(o.data);
  std::optional<GroundTruth> truth;
  if (!o.truth.empty()) {
    const SyntheticGenConfig g = generator_from_json(read_text_file(o.truth));
    truth = GroundTruth{g.event_truth(), g.censor_truth()};
  } else if (o.require_l1) {
    throw ValidationError("Survival-l1 requested but no ground-truth sidecar given (--truth)");
  }
  const std::string report = report_to_json(evaluate(ck, data, truth));
  if (o.out.empty()) {
    std::cout << report;
  } else {
    write_text_file(o.out, report);
  }
}

void cmd_experiment(const Options& o) {
  ExperimentConfig cfg = experiment_config_from_json(read_text_file(o.config));
  if (o.seed) cfg.seeds = {*o.seed};
  const ExperimentOutcome outcome = run_experiment(cfg, o.workers, fs::path(o.out));
  std::cout << outcome.results.size() << " arms completed, " << outcome.failures.size()
            << " failed\n";
  for (const auto& f : outcome.failures) {
    std::cerr << "arm tau=" << format_double(f.tau_star) << " seed=" << f.seed << " " << f.model
              << ": " << f.error << "\n";
  }
  if (outcome.results.empty() && !outcome.failures.empty()) {
    throw NumericalFailure("every experiment arm failed");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weibull proportional-hazards survival models under copula-dependent censoring"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool need_out) {
    sub->add_option("--config", o.config, "JSON configuration file");
    sub->add_option("--seed", o.seed, "random seed");
    auto* out = sub->add_option("--out", o.out, "output path");
    if (need_out) out->required();
    sub->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  };

  auto* gen = app.add_subcommand("generate", "generate a synthetic dependent-censoring dataset");
  common(gen, true);
  gen->add_option("--preset", o.preset, "linear_risk | nonlinear_risk | metric_bias");
  gen->add_option("--tau", o.tau, "Kendall tau of the coupling copula");
  gen->add_option("--family", o.family, "copula family (default clayton)");
  gen->add_option("--n", o.n, "number of records");

  auto* cen = app.add_subcommand("censor", "artificially censor a regression CSV");
  common(cen, true);
  cen->add_option("--input", o.input, "regression CSV with a header row")->required();
  cen->add_option("--target", o.target, "target column (default: last)");
  cen->add_option("--family", o.family, "copula family (default clayton)");
  cen->add_option("--tau", o.tau, "Kendall tau (0 = independence)");
  cen->add_flag("--shift-zeros", o.shift_zeros, "shift targets by 1e-3 * max(y) when zeros occur");

  auto* tr = app.add_subcommand("train", "fit event/censor models and copula");
  common(tr, true);
  tr->add_option("--data", o.data, "survival CSV")->required();
  tr->add_option("--copula", o.copula, "independence | clayton | frank | mixture");
  tr->add_option("--risk", o.risk, "linear | mlp");
  tr->add_option("--lr", o.lr, "learning rate");
  tr->add_option("--epochs", o.epochs, "maximum epochs");
  tr->add_option("--patience", o.patience, "early-stopping patience");
  tr->add_option("--l2", o.l2, "l2 coefficient on risk weights");
  tr->add_option("--theta-init", o.theta_init, "initial copula parameter");

  auto* ev = app.add_subcommand("evaluate", "score a checkpoint on a dataset");
  common(ev, false);
  ev->add_option("--checkpoint", o.checkpoint, "checkpoint JSON")->required();
  ev->add_option("--data", o.data, "survival CSV")->required();
  ev->add_option("--truth", o.truth, "ground-truth sidecar JSON");
  ev->add_flag("--require-l1", o.require_l1, "fail unless Survival-l1 can be computed");

  auto* ex = app.add_subcommand("experiment", "run an experiment grid");
  common(ex, true);
  ex->get_option("--config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "generate") cmd_generate(o);
    if (name == "censor") cmd_censor(o);
    if (name == "train") cmd_train(o);
    if (name == "evaluate") cmd_evaluate(o);
    if (name == "experiment") cmd_experiment(o);
  } catch (const IoError& e) {
    std::cerr << "copsurv " << name << ": " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalFailure& e) {
    std::cerr << "copsurv " << name << ": " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "copsurv " << name << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "copsurv " << name << ": " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
