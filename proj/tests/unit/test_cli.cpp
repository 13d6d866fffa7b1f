#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "copsurv/dataset.hpp"
#include "copsurv/datagen.hpp"
#include "copsurv/serialization.hpp"
#include "doctest.h"
#include "json.hpp"
#include "schema_check.hpp"

using namespace copsurv;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "copsurv_test_cli";
  static const bool fresh = [&] {
    fs::remove_all(dir);
    return fs::create_directories(dir);
  }();
  (void)fresh;
  return dir;
}

Run cli(const std::string& args) {
  const fs::path dir = work_dir();
  const std::string cmd = "cd '" + dir.string() + "' && '" COPSURV_CLI_PATH "' " + args +
                          " > stdout.txt 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text_file(dir / "stdout.txt"),
          read_text_file(dir / "stderr.txt")};
}

std::string slurp(const std::string& name) { return read_text_file(work_dir() / name); }

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("generate") {
  const Run r = cli("generate --preset linear_risk --tau 0.5 --n 1000 --seed 7 --out g.csv");
  REQUIRE(r.code == 0);
  const std::string csv = slurp("g.csv");
  CHECK(line_count(csv) == 1001);
  const json side = json::parse(slurp("g.truth.json"));
  CHECK(side["nu_E"] == 4);
  CHECK(side["rho_E"] == 14);
  CHECK(line_count(slurp("g.latent.csv")) == 1001);

  SUBCASE("byte-identical rerun") {
    const std::string truth = slurp("g.truth.json"), latent = slurp("g.latent.csv");
    REQUIRE(cli("generate --preset linear_risk --tau 0.5 --n 1000 --seed 7 --out g.csv").code == 0);
    CHECK(slurp("g.csv") == csv);
    CHECK(slurp("g.truth.json") == truth);
    CHECK(slurp("g.latent.csv") == latent);
  }
  SUBCASE("tau zero is independence") {
    REQUIRE(cli("generate --preset linear_risk --tau 0 --n 50 --seed 7 --out g0.csv").code == 0);
    CHECK(json::parse(slurp("g0.truth.json"))["copula"]["family"] == "Independence");
  }
  SUBCASE("config file") {
    write_text_file(work_dir() / "gen.json",
                    R"({"preset": "nonlinear_risk", "n": 40, "seed": 3, "family": "frank", "tau": 0.3})");
    REQUIRE(cli("generate --config gen.json --out gc.csv").code == 0);
    CHECK(line_count(slurp("gc.csv")) == 41);
    CHECK(json::parse(slurp("gc.truth.json"))["rho_E"] == 17);
  }
}

TEST_CASE("generate validation errors name the field") {
  Run r = cli("generate --preset linear_risk --tau 1.5 --n 10 --out bad.csv");
  CHECK(r.code == 1);
  CHECK(r.err.find("tau") != std::string::npos);
  write_text_file(work_dir() / "badgen.json", R"({"preset": "linear_risk", "n": 0, "seed": 1})");
  r = cli("generate --config badgen.json --out bad.csv");
  CHECK(r.code == 1);
  CHECK(r.err.find("'n'") != std::string::npos);
  CHECK(cli("generate --bogus").code == 1);
  CHECK(cli("generate --config missing.json --out x.csv").code == 3);
}

TEST_CASE("censor") {
  write_regression_csv(synthetic_regression(800, 4, 3), work_dir() / "reg.csv");
  write_text_file(work_dir() / "fit.json", R"({"max_epochs": 1500, "patience": 100, "learning_rate": 0.01})");
  const Run r = cli("censor --input reg.csv --family clayton --tau 0.8 --seed 1 --config fit.json --out c.csv");
  REQUIRE(r.code == 0);
  const json meta = json::parse(slurp("c.meta.json"));
  const double frac = meta["censoring_fraction"].get<double>();
  CHECK(frac > 0.0);
  CHECK(frac < 1.0);
  CHECK(meta["nu_censor"].get<double>() ==
        doctest::Approx(meta["nu_event"].get<double>() / 0.6).epsilon(1e-15));
  CHECK(line_count(slurp("c.csv")) == 801);

  SUBCASE("independence is stable across seeds") {
    REQUIRE(cli("censor --input reg.csv --tau 0 --seed 1 --config fit.json --out i1.csv").code == 0);
    REQUIRE(cli("censor --input reg.csv --tau 0 --seed 2 --config fit.json --out i2.csv").code == 0);
    const double a = json::parse(slurp("i1.meta.json"))["censoring_fraction"].get<double>();
    const double b = json::parse(slurp("i2.meta.json"))["censoring_fraction"].get<double>();
    CHECK(std::abs(a - b) < 0.05);
  }
  SUBCASE("byte-identical rerun") {
    const std::string before = slurp("c.csv");
    REQUIRE(cli("censor --input reg.csv --family clayton --tau 0.8 --seed 1 --config fit.json --out c.csv").code == 0);
    CHECK(slurp("c.csv") == before);
  }
  SUBCASE("zero targets need the shift option") {
    write_text_file(work_dir() / "zero.csv", "a,y\n0.1,1.0\n0.2,0\n0.3,2.0\n0.4,3.0\n0.5,1.5\n0.6,2.5\n");
    const Run z = cli("censor --input zero.csv --tau 0.5 --config fit.json --out z.csv");
    CHECK(z.code == 1);
    CHECK(z.err.find("shift") != std::string::npos);
    CHECK(cli("censor --input zero.csv --tau 0.5 --config fit.json --shift-zeros --out z.csv").code == 0);
    CHECK(json::parse(slurp("z.meta.json"))["shift"].get<double>() == doctest::Approx(3e-3));
  }
  SUBCASE("missing input") { CHECK(cli("censor --input nothere.csv --out z.csv").code == 3); }
}

TEST_CASE("train and evaluate") {
  REQUIRE(cli("generate --preset linear_risk --tau 0.6 --n 600 --seed 2 --out t.csv").code == 0);

  SUBCASE("independence trace has no theta column") {
    const Run r = cli("train --data t.csv --copula independence --epochs 20 --out ind.json");
    REQUIRE(r.code == 0);
    const std::string trace = slurp("ind.trace.csv");
    CHECK(trace.substr(0, trace.find('\n')) == "epoch,train_negloglik,val_negloglik");
    CHECK(r.out.find("val_negloglik") != std::string::npos);
  }
  SUBCASE("clayton") {
    const Run r = cli("train --data t.csv --copula clayton --epochs 40 --seed 3 --out cl.json");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("tau_hat") != std::string::npos);
    const std::string trace = slurp("cl.trace.csv");
    CHECK(trace.substr(0, trace.find('\n')) == "epoch,train_negloglik,val_negloglik,theta_hat");
    const std::string ck = slurp("cl.json");
    REQUIRE(cli("train --data t.csv --copula clayton --epochs 40 --seed 3 --out cl.json").code == 0);
    CHECK(slurp("cl.json") == ck);
    CHECK(slurp("cl.trace.csv") == trace);
    auto checker = schema::Checker(json::parse(read_text_file(fs::path(COPSURV_SCHEMA_DIR) / "checkpoint.schema.json")));
    CHECK(checker.check(json::parse(ck)).empty());
  }
  SUBCASE("mixture trace columns") {
    REQUIRE(cli("train --data t.csv --copula mixture --risk mlp --epochs 10 --out mx.json").code == 0);
    const std::string trace = slurp("mx.trace.csv");
    CHECK(trace.substr(0, trace.find('\n')) ==
          "epoch,train_negloglik,val_negloglik,theta_frank,theta_clayton,kappa");
  }
  SUBCASE("ground truth against its own sidecar") {
    const auto g = generator_from_json(slurp("t.truth.json"));
    save_checkpoint({g.event_truth(), g.censor_truth(), g.copula}, work_dir() / "truth_ck.json");
    const Run r = cli("evaluate --checkpoint truth_ck.json --data t.csv --truth t.truth.json --require-l1 --out rep.json");
    REQUIRE(r.code == 0);
    const json rep = json::parse(slurp("rep.json"));
    CHECK(rep["survival_l1_event"].get<double>() < 1e-3);
    CHECK(rep["survival_l1_censor"].get<double>() < 1e-3);
    CHECK(rep.contains("c_index"));
    auto checker = schema::Checker(
        json::parse(read_text_file(fs::path(COPSURV_SCHEMA_DIR) / "evaluation_report.schema.json")));
    CHECK(checker.check(rep).empty());
  }
  SUBCASE("evaluate without a sidecar") {
    REQUIRE(cli("train --data t.csv --copula frank --epochs 5 --out fr.json").code == 0);
    const Run r = cli("evaluate --checkpoint fr.json --data t.csv");
    REQUIRE(r.code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.contains("c_index"));
    CHECK(!rep.contains("survival_l1_event"));
    CHECK(cli("evaluate --checkpoint fr.json --data t.csv --require-l1").code == 1);
  }
  SUBCASE("bad options") {
    CHECK(cli("train --data t.csv --copula gumbel --out x.json").code == 1);
    CHECK(cli("train --data t.csv --lr -1 --out x.json").code == 1);
    CHECK(cli("train --data gone.csv --out x.json").code == 3);
  }
}

TEST_CASE("numerical failure exit code") {
  // Covariates this large overflow the initial hazard.
  write_text_file(work_dir() / "huge.csv",
                  "x0,time,event\n1e300,1,1\n-1e300,2,0\n1e300,3,1\n-1e300,1.5,0\n1e300,2.5,1\n");
  const Run r = cli("train --data huge.csv --copula clayton --epochs 5 --out h.json");
  CHECK(r.code == 2);
  CHECK(r.err.find("epoch") != std::string::npos);
}

TEST_CASE("experiment") {
  write_text_file(work_dir() / "exp.json", R"({
    "id": "mini", "kind": "synthetic_sweep", "family": "clayton", "taus": [0.0, 0.5],
    "preset": "linear_risk", "n_train": 300, "n_val": 100, "n_test": 100, "seeds": [0, 1],
    "train": {"max_epochs": 30, "patience": 30}
  })");
  const Run r = cli("experiment --config exp.json --workers 2 --out exp_out");
  REQUIRE(r.code == 0);
  const std::string results = slurp("exp_out/results.csv");
  CHECK(results.substr(0, results.find('\n')) ==
        "experiment_id,tau_star,seed,model,family,survival_l1_event,survival_l1_censor,tau_hat,"
        "c_index,brier,r_squared,wall_time_s");
  CHECK(line_count(results) == 1 + 2 * 2 * 2);
  CHECK(fs::exists(work_dir() / "exp_out/summary.csv"));
  CHECK(fs::exists(work_dir() / "exp_out/failures.json"));

  const std::string summary = slurp("exp_out/summary.csv");
  REQUIRE(cli("experiment --config exp.json --workers 1 --out exp_out2").code == 0);
  CHECK(slurp("exp_out2/results.csv") == results);
  CHECK(slurp("exp_out2/summary.csv") == summary);

  SUBCASE("seed override") {
    REQUIRE(cli("experiment --config exp.json --seed 5 --out exp_seed").code == 0);
    CHECK(line_count(slurp("exp_seed/results.csv")) == 1 + 2 * 2);
  }
  SUBCASE("invalid config") {
    write_text_file(work_dir() / "bad_exp.json", R"({"kind": "synthetic_sweep", "taus": [1.0]})");
    const Run b = cli("experiment --config bad_exp.json --out bad_out");
    CHECK(b.code == 1);
    CHECK(b.err.find("tau") != std::string::npos);
  }
}
