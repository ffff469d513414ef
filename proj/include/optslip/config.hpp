#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "optslip/control.hpp"
#include "optslip/dataset.hpp"
#include "optslip/estimators.hpp"
#include "optslip/mlp.hpp"
#include "optslip/vehicle.hpp"

namespace optslip {

// Fully resolved run configuration: defaults, overlaid by an optional JSON
// config file, overlaid by command-line flags. Every command writes the
// resolved copy next to its outputs for provenance.
struct RunConfig {
  std::uint64_t seed = 20240317;
  std::filesystem::path out_dir = "out";

  DatasetMeta dataset;
  TrainConfig training;
  std::vector<int> hidden_layers{250, 250};

  VehicleParams vehicle;
  double dt = 1e-3;
  double v0 = 80.0;
  double v_stop = 1.0;
  double runtime_noise_sigma = 0.005;
  double estimator_hold = 0.10;
  long max_steps = 400000;

  SmcGains smc;
  PiGains pi;
  RlsEstimatorConfig rls;

  double sweep_min = 100.0;
  double sweep_max = 12000.0;
  double sweep_step = 25.0;

  int log_decimation = 1;

  // Copies the global seed into the per-stage seeds.
  RunConfig resolved() const;

  ManeuverConfig base_maneuver() const;
  std::vector<double> sweep_grid() const;
  std::vector<int> mlp_dims() const;

  std::filesystem::path dataset_path() const { return out_dir / "dataset.csv"; }
  std::filesystem::path model_path() const { return out_dir / "model.json"; }
};

RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);
std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& text);

}  // namespace optslip
