#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "optslip/config.hpp"

namespace optslip::cli {

// Exit codes: 0 success, 1 usage, 2 IO/format, 3 acceptance-band failure.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BandFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Generates the synthetic dataset and writes dataset.csv (+ sidecar).
void cmd_gen_data(const RunConfig& config);

// Trains the MLP on a saved dataset; writes model.json and train_report.csv.
void cmd_train(const RunConfig& config,
               const std::filesystem::path& dataset_path);

// Prints train/validation/test/reference RMSE for a saved model.
void cmd_eval(const RunConfig& config, const std::filesystem::path& model_path,
              const std::filesystem::path& dataset_path);

// Runs one maneuver and writes its log CSV plus an SVG of the estimates.
struct SimulateOptions {
  std::string scenario = "D";
  std::string estimator = "MLP";    // MLP | RLS | none
  std::string controller = "none";  // none | PI | SMC
  double brake_torque = 0.0;        // 0 = sweep the initial surface
};
void cmd_simulate(const RunConfig& config, const SimulateOptions& options);

// Sweeps the brake torque on one reference surface.
void cmd_sweep_torque(const RunConfig& config, const std::string& surface_tag);

// Runs the open- and closed-loop suites and checks the reporting bands.
// Throws BandFailure when a band is missed (exit code 3).
void cmd_suite(const RunConfig& config);

}  // namespace optslip::cli
