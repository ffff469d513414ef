#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "optslip/cli.hpp"

using namespace optslip;

int main(int argc, char** argv) {
  CLI::App app{"Optimal-slip estimation toolkit: synthetic friction data, "
               "MLP/RLS estimators and quarter-car braking experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool out_set = false;
  app.add_option("--config", config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  app.add_option_function<std::uint64_t>(
         "--seed", [&](std::uint64_t v) { seed = v; seed_set = true; },
         "global seed override");
  app.add_option_function<std::string>(
         "--out", [&](const std::string& v) { out_dir = v; out_set = true; },
         "output directory");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate the synthetic dataset");
  int n_diag = -1, n_hyp = -1, stride = -1;
  double sigma = -1.0;
  gen->add_option("--n-diag", n_diag, "curves on the cube diagonal");
  gen->add_option("--n-hyp", n_hyp, "latin-hypercube curves");
  gen->add_option("--stride", stride, "window stride");
  gen->add_option("--sigma", sigma, "noise stddev on mu");

  // train
  auto* tr = app.add_subcommand("train", "train the MLP on a dataset");
  std::string dataset_path;
  int epochs = -1, batch_size = -1;
  double lr = -1.0;
  tr->add_option("--dataset", dataset_path, "dataset CSV path");
  tr->add_option("--epochs", epochs, "training epochs");
  tr->add_option("--batch-size", batch_size, "minibatch size");
  tr->add_option("--lr", lr, "learning rate");

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a trained model");
  std::string model_path, eval_dataset_path;
  ev->add_option("--model", model_path, "model JSON path");
  ev->add_option("--dataset", eval_dataset_path, "dataset CSV path");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one braking maneuver");
  cli::SimulateOptions sim_options;
  sim->add_option("scenario", sim_options.scenario,
                  "scenario name, e.g. D or D->S->D");
  sim->add_option("--estimator", sim_options.estimator, "MLP, RLS or none");
  sim->add_option("--controller", sim_options.controller, "none, PI or SMC");
  sim->add_option("--tb", sim_options.brake_torque,
                  "brake request in N m (0 = sweep)");

  // sweep-torque
  auto* sw = app.add_subcommand("sweep-torque",
                                "sweep the brake request on a surface");
  std::string surface = "D";
  sw->add_option("surface", surface, "surface tag D, W or S");

  // suite
  auto* suite = app.add_subcommand(
      "suite", "run the open- and closed-loop scenario suites");
  int suite_epochs = -1;  // reserved for parity with train
  (void)suite_epochs;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    if (seed_set) config.seed = seed;
    if (out_set) config.out_dir = out_dir;

    if (*gen) {
      if (n_diag >= 0) config.dataset.n_diag = n_diag;
      if (n_hyp >= 0) config.dataset.n_hyp = n_hyp;
      if (stride > 0) config.dataset.stride = stride;
      if (sigma >= 0.0) config.dataset.sigma = sigma;
      cli::cmd_gen_data(config);
    } else if (*tr) {
      if (epochs > 0) config.training.epochs = epochs;
      if (batch_size > 0) config.training.batch_size = batch_size;
      if (lr >= 0.0) config.training.learning_rate = lr;
      cli::cmd_train(config, dataset_path);
    } else if (*ev) {
      cli::cmd_eval(config, model_path, eval_dataset_path);
    } else if (*sim) {
      cli::cmd_simulate(config, sim_options);
    } else if (*sw) {
      cli::cmd_sweep_torque(config, surface);
    } else if (*suite) {
      cli::cmd_suite(config);
    }
    return 0;
  } catch (const cli::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const cli::BandFailure& e) {
    std::fprintf(stderr, "reporting bands missed: %s\n", e.what());
    return 3;
  } catch (const cli::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
