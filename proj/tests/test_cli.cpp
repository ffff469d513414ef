#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "optslip/cli.hpp"
#include "optslip/mlp.hpp"

using namespace optslip;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

RunConfig toy_config(const fs::path& out) {
  RunConfig config;
  config.out_dir = out;
  config.seed = 99;
  config.dataset.n_diag = 3;
  config.dataset.n_hyp = 5;
  config.dataset.curve_points = 150;
  config.dataset.window_size = 15;
  config.dataset.stride = 15;
  config.training.epochs = 4;
  config.training.batch_size = 16;
  config.hidden_layers = {24, 24};
  return config;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const char* bin = std::getenv("OPTSLIP_CLI");
  REQUIRE(bin != nullptr);
  const int status = std::system((std::string(bin) + " " + args +
                                  " > /dev/null 2>&1")
                                     .c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("gen-data, train and eval round trip on a toy config") {
  const fs::path dir = fresh_dir("optslip_cli_pipeline");
  RunConfig config = toy_config(dir / "a");

  cli::cmd_gen_data(config);
  CHECK(fs::exists(config.dataset_path()));
  CHECK(fs::exists(config.out_dir / "config.resolved.json"));

  cli::cmd_train(config, {});
  CHECK(fs::exists(config.model_path()));
  CHECK(fs::exists(config.out_dir / "train_report.csv"));

  // training decreased the loss on this toy set
  std::ifstream report(config.out_dir / "train_report.csv");
  std::string header, first, second;
  std::getline(report, header);
  std::getline(report, first);
  std::getline(report, second);
  const double mse0 = std::stod(first.substr(first.find(',') + 1));
  const double mse1 = std::stod(second.substr(second.find(',') + 1));
  CHECK(mse1 < mse0);

  cli::cmd_eval(config, {}, {});
  CHECK(fs::exists(config.out_dir / "eval.csv"));
  std::ifstream eval_csv(config.out_dir / "eval.csv");
  int lines = 0;
  std::string line;
  while (std::getline(eval_csv, line)) ++lines;
  CHECK(lines == 5);  // header + four splits

  SUBCASE("model/dataset shape mismatch is a format error") {
    RunConfig other = config;
    other.dataset.window_size = 10;
    other.out_dir = dir / "b";
    cli::cmd_gen_data(other);
    CHECK_THROWS_AS(
        cli::cmd_eval(other, config.model_path(), other.dataset_path()),
        cli::IoError);
  }
}

TEST_CASE("gen-data reruns are byte-identical for the same seed") {
  const fs::path dir = fresh_dir("optslip_cli_determinism");
  RunConfig a = toy_config(dir / "a");
  RunConfig b = toy_config(dir / "b");
  cli::cmd_gen_data(a);
  cli::cmd_gen_data(b);
  CHECK(read_file(a.dataset_path()) == read_file(b.dataset_path()));

  RunConfig c = toy_config(dir / "c");
  c.seed = 100;
  cli::cmd_gen_data(c);
  CHECK(read_file(a.dataset_path()) != read_file(c.dataset_path()));
}

TEST_CASE("zero learning rate leaves the initial model") {
  const fs::path dir = fresh_dir("optslip_cli_lr0");
  RunConfig config = toy_config(dir);
  config.training.learning_rate = 0.0;
  cli::cmd_gen_data(config);
  cli::cmd_train(config, {});
  const MlpModel trained = load_model(config.model_path());
  const MlpModel initial = init_model(config.mlp_dims(), config.seed);
  for (std::size_t l = 0; l < trained.weights.size(); ++l) {
    CHECK((trained.weights[l] - initial.weights[l]).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("simulate writes a log and a plot") {
  const fs::path dir = fresh_dir("optslip_cli_simulate");
  RunConfig config = toy_config(dir);
  config.max_steps = 400000;
  cli::cmd_gen_data(config);
  cli::cmd_train(config, {});

  cli::SimulateOptions options;
  options.scenario = "D";
  options.estimator = "MLP";
  options.controller = "none";
  options.brake_torque = 5000.0;
  cli::cmd_simulate(config, options);
  CHECK(fs::exists(dir / "maneuver_D.csv"));
  CHECK(fs::exists(dir / "maneuver_D.svg"));
  const std::string svg = read_file(dir / "maneuver_D.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  SUBCASE("scenario with transitions honours the schedule") {
    options.scenario = "S->D->S";
    options.controller = "SMC";
    options.estimator = "none";
    options.brake_torque = 870.0;
    cli::cmd_simulate(config, options);
    CHECK(fs::exists(dir / "maneuver_S_D_S.csv"));
    // the gt column steps twice between the snow and dry optima
    std::ifstream is(dir / "maneuver_S_D_S.csv");
    std::string header, line;
    std::getline(is, header);
    std::set<std::string> gts;
    while (std::getline(is, line)) {
      std::stringstream ss(line);
      std::string field;
      for (int i = 0; i <= 6; ++i) std::getline(ss, field, ',');
      gts.insert(field);
    }
    CHECK(gts.size() == 2);  // snow and dry optima
  }

  SUBCASE("unknown scenario is a usage error") {
    options.scenario = "Q";
    CHECK_THROWS_AS(cli::cmd_simulate(config, options), cli::UsageError);
  }
}

TEST_CASE("binary exit codes") {
  const fs::path dir = fresh_dir("optslip_cli_binary");
  CHECK(run_cli("--out " + (dir / "x").string() +
                " gen-data --n-diag 3 --n-hyp 3") == 0);
  // unknown subcommand / bad flags are usage errors
  CHECK(run_cli("frobnicate") == 1);
  // missing model file is an IO error
  CHECK(run_cli("--out " + (dir / "x").string() + " eval --model " +
                (dir / "missing.json").string()) == 2);
}
