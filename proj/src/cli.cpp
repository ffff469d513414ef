#include "optslip/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "optslip/experiments.hpp"
#include "optslip/svg.hpp"

namespace optslip::cli {

namespace {

void prepare_out_dir(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " +
                  config.out_dir.string() + ": " + ec.message());
  }
  save_config(config, config.out_dir / "config.resolved.json");
}

DatasetSplits load_dataset_or_throw(const std::filesystem::path& path) {
  try {
    return load_dataset(path);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
}

MlpModel load_model_or_throw(const std::filesystem::path& path) {
  try {
    return load_model(path);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
}

// Windows of the three reference curves, built on the fly with the dataset
// noise level. Used as the extra "Reference" evaluation split.
void reference_windows(const RunConfig& config, Eigen::MatrixXd& features,
                       Eigen::VectorXd& labels) {
  const auto& meta = config.dataset;
  std::vector<LabeledSample> samples;
  Rng root(config.seed, 0x72656673);
  int stream = 0;
  for (Surface s : {Surface::Dry, Surface::Wet, Surface::Snow}) {
    const FrictionParams params = reference_surface(s);
    const double label = optimal_slip(params).lambda_star;
    Rng rng = root.fork(static_cast<std::uint64_t>(stream++));
    const auto curve = discretize_curve(params, meta.curve_points);
    auto windows = extract_windows(curve, meta.window_size, meta.stride,
                                   meta.sigma, rng, label);
    samples.insert(samples.end(), windows.begin(), windows.end());
  }
  features.resize(static_cast<Eigen::Index>(samples.size()),
                  2 * meta.window_size);
  labels.resize(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (int c = 0; c < 2 * meta.window_size; ++c) {
      features(static_cast<Eigen::Index>(i), c) =
          samples[i].features[static_cast<std::size_t>(c)];
    }
    labels[static_cast<Eigen::Index>(i)] = samples[i].label;
  }
}

std::map<std::string, double> sweep_initial_surfaces(
    const RunConfig& config, std::span<const Scenario> scenarios) {
  std::map<std::string, double> torques;
  const auto grid = config.sweep_grid();
  const ManeuverConfig base = config.base_maneuver();
  for (const Scenario& scenario : scenarios) {
    const std::string tag = surface_tag(scenario.tags.front());
    if (torques.count(tag)) continue;
    torques[tag] = swept_brake_torque_refined(
        reference_surface(scenario.tags.front()), grid, base);
  }
  return torques;
}

SuiteOptions suite_options(const RunConfig& config,
                           std::span<const Scenario> scenarios) {
  SuiteOptions options;
  options.base = config.base_maneuver();
  options.rls = config.rls;
  options.window_size = config.dataset.window_size;
  options.estimator_hold = config.estimator_hold;
  options.brake_torques = sweep_initial_surfaces(config, scenarios);
  return options;
}

}  // namespace

void cmd_gen_data(const RunConfig& raw) {
  const RunConfig config = raw.resolved();
  prepare_out_dir(config);
  const DatasetSplits splits = build_dataset(config.dataset);
  try {
    save_dataset(splits, config.dataset_path());
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
  std::printf("dataset: %lld train / %lld validation / %lld test samples "
              "(%zu curves) -> %s\n",
              static_cast<long long>(splits.train.size()),
              static_cast<long long>(splits.validation.size()),
              static_cast<long long>(splits.test.size()),
              splits.curves.size(), config.dataset_path().c_str());
}

void cmd_train(const RunConfig& raw, const std::filesystem::path& dataset_path) {
  const RunConfig config = raw.resolved();
  prepare_out_dir(config);
  const auto path =
      dataset_path.empty() ? config.dataset_path() : dataset_path;
  const DatasetSplits splits = load_dataset_or_throw(path);

  const MlpModel initial = init_model(config.mlp_dims(), config.seed);
  const TrainReport report = train(initial, splits, config.training);
  try {
    save_model(report.model, config.model_path());
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }

  const auto report_path = config.out_dir / "train_report.csv";
  {
    std::ofstream os(report_path);
    if (!os) throw IoError("cannot write " + report_path.string());
    os << "epoch,train_mse,validation_rmse\n";
    for (std::size_t e = 0; e < report.train_mse.size(); ++e) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%zu,%.8g,%.8g\n", e,
                    report.train_mse[e], report.validation_rmse[e]);
      os << buf;
    }
  }

  const double held_out =
      splits.test.size() > 0
          ? evaluate_rmse(report.model, splits.test.features,
                          splits.test.labels)
          : std::numeric_limits<double>::quiet_NaN();
  std::printf("trained %d epochs (best epoch %d); held-out test RMSE %.4f\n",
              config.training.epochs, report.best_epoch, held_out);
  std::printf("model -> %s\n", config.model_path().c_str());
}

void cmd_eval(const RunConfig& raw, const std::filesystem::path& model_path,
              const std::filesystem::path& dataset_path) {
  const RunConfig config = raw.resolved();
  prepare_out_dir(config);
  const auto mpath = model_path.empty() ? config.model_path() : model_path;
  const auto dpath =
      dataset_path.empty() ? config.dataset_path() : dataset_path;
  const MlpModel model = load_model_or_throw(mpath);
  const DatasetSplits splits = load_dataset_or_throw(dpath);
  if (model.input_size() != 2 * splits.meta.window_size) {
    throw IoError("model input size " + std::to_string(model.input_size()) +
                  " does not match dataset window size P=" +
                  std::to_string(splits.meta.window_size));
  }

  Eigen::MatrixXd ref_features;
  Eigen::VectorXd ref_labels;
  {
    RunConfig with_meta = config;
    with_meta.dataset = splits.meta;
    reference_windows(with_meta, ref_features, ref_labels);
  }

  const double train_rmse =
      evaluate_rmse(model, splits.train.features, splits.train.labels);
  const double val_rmse = evaluate_rmse(model, splits.validation.features,
                                        splits.validation.labels);
  const double test_rmse =
      evaluate_rmse(model, splits.test.features, splits.test.labels);
  const double ref_rmse = evaluate_rmse(model, ref_features, ref_labels);

  std::printf("RMSE  training   %.4f\n", train_rmse);
  std::printf("RMSE  validation %.4f\n", val_rmse);
  std::printf("RMSE  test       %.4f\n", test_rmse);
  std::printf("RMSE  reference  %.4f\n", ref_rmse);

  const auto eval_path = config.out_dir / "eval.csv";
  std::ofstream os(eval_path);
  if (!os) throw IoError("cannot write " + eval_path.string());
  os << "split,rmse\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "training,%.6f\n", train_rmse);
  os << buf;
  std::snprintf(buf, sizeof(buf), "validation,%.6f\n", val_rmse);
  os << buf;
  std::snprintf(buf, sizeof(buf), "test,%.6f\n", test_rmse);
  os << buf;
  std::snprintf(buf, sizeof(buf), "reference,%.6f\n", ref_rmse);
  os << buf;
}

void cmd_simulate(const RunConfig& raw, const SimulateOptions& options) {
  const RunConfig config = raw.resolved();
  prepare_out_dir(config);

  Scenario scenario;
  try {
    scenario = scenario_from_name(options.scenario);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ManeuverConfig maneuver = config.base_maneuver();
  maneuver.plan = scenario.plan(config.v0);
  if (options.brake_torque > 0.0) {
    maneuver.brake_request = options.brake_torque;
  } else {
    maneuver.brake_request = swept_brake_torque_refined(
        reference_surface(scenario.tags.front()), config.sweep_grid(),
        maneuver);
    std::printf("swept brake torque for %s: %.0f N m\n",
                surface_tag(scenario.tags.front()).c_str(),
                maneuver.brake_request);
  }

  if (options.controller == "PI") {
    maneuver.controller = ControllerKind::Pi;
  } else if (options.controller == "SMC") {
    maneuver.controller = ControllerKind::Smc;
  } else if (options.controller == "none") {
    maneuver.controller = ControllerKind::None;
  } else {
    throw UsageError("unknown controller '" + options.controller + "'");
  }

  // The requested estimator drives the set-point; the other one observes the
  // same stream so both traces land in the plot.
  std::unique_ptr<MlpEstimator> mlp;
  std::unique_ptr<RlsEstimator> rls;
  if (options.estimator == "MLP" || options.estimator == "none") {
    if (std::filesystem::exists(config.model_path()) ||
        options.estimator == "MLP") {
      const MlpModel model = load_model_or_throw(config.model_path());
      mlp = std::make_unique<MlpEstimator>(model, config.dataset.window_size,
                                           config.estimator_hold);
    }
    rls = std::make_unique<RlsEstimator>(config.rls, config.estimator_hold);
  } else if (options.estimator == "RLS") {
    rls = std::make_unique<RlsEstimator>(config.rls, config.estimator_hold);
    if (std::filesystem::exists(config.model_path())) {
      const MlpModel model = load_model_or_throw(config.model_path());
      mlp = std::make_unique<MlpEstimator>(model, config.dataset.window_size,
                                           config.estimator_hold);
    }
  } else {
    throw UsageError("unknown estimator '" + options.estimator + "'");
  }

  SlipEstimator* active = nullptr;
  std::vector<SlipEstimator*> observers;
  if (options.estimator == "MLP") {
    maneuver.estimator = EstimatorKind::Mlp;
    active = mlp.get();
    if (rls) observers.push_back(rls.get());
  } else if (options.estimator == "RLS") {
    maneuver.estimator = EstimatorKind::Rls;
    active = rls.get();
    if (mlp) observers.push_back(mlp.get());
  } else {
    maneuver.estimator = EstimatorKind::None;
    if (mlp) observers.push_back(mlp.get());
    if (rls) observers.push_back(rls.get());
  }

  ManeuverLog log;
  try {
    log = run_maneuver(maneuver, active, observers);
  } catch (const std::exception& e) {
    throw IoError(std::string("maneuver failed: ") + e.what());
  }

  std::string file_stem = scenario.name;
  std::size_t pos;
  while ((pos = file_stem.find("->")) != std::string::npos) {
    file_stem.replace(pos, 2, "_");
  }
  const auto csv_path = config.out_dir / ("maneuver_" + file_stem + ".csv");
  const auto svg_path = config.out_dir / ("maneuver_" + file_stem + ".svg");
  log.write_csv(csv_path, config.log_decimation);

  std::vector<SvgSeries> series;
  SvgSeries gt{"lambda*_GT", "#000000", {}, {}};
  for (const auto& row : log.rows) {
    gt.x.push_back(row.t);
    gt.y.push_back(row.lambda_star_gt);
  }
  series.push_back(std::move(gt));
  const auto add_series = [&](const std::string& label,
                              const std::string& color,
                              const std::vector<double>& est) {
    SvgSeries s{label, color, {}, {}};
    for (std::size_t i = 0; i < log.rows.size(); ++i) {
      s.x.push_back(log.rows[i].t);
      s.y.push_back(est[i]);
    }
    series.push_back(std::move(s));
  };
  if (active != nullptr) {
    std::vector<double> est;
    est.reserve(log.rows.size());
    for (const auto& row : log.rows) est.push_back(row.lambda_star_est);
    add_series(std::string("lambda*_") + options.estimator,
               options.estimator == "MLP" ? "#d62728" : "#1f77b4", est);
  }
  for (std::size_t i = 0; i < observers.size(); ++i) {
    const std::string label = "lambda*_" + observers[i]->name();
    const std::string color =
        observers[i]->name() == "MLP" ? "#d62728" : "#1f77b4";
    add_series(label, color, log.observer_estimates[i]);
  }
  write_line_chart(svg_path, "Scenario " + scenario.name, "time [s]",
                   "optimal slip", series);

  std::printf("scenario %s: distance %.2f m, braking time %.2f s%s\n",
              scenario.name.c_str(), log.distance, log.braking_time,
              log.wheel_locked ? " (wheel locked)" : "");
  std::printf("log -> %s\nplot -> %s\n", csv_path.c_str(), svg_path.c_str());
}

void cmd_sweep_torque(const RunConfig& raw, const std::string& surface_tag_in) {
  const RunConfig config = raw.resolved();
  prepare_out_dir(config);
  Surface surface;
  try {
    surface = parse_surface_tag(surface_tag_in);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto sweep = sweep_brake_torque(reference_surface(surface),
                                        config.sweep_grid(),
                                        config.base_maneuver());
  const double refined = swept_brake_torque_refined(
      reference_surface(surface), config.sweep_grid(), config.base_maneuver());
  const auto path = config.out_dir / ("sweep_" + surface_tag_in + ".csv");
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << "brake_torque,distance_m,locked,stopped\n";
  for (const auto& entry : sweep.entries) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.2f,%.4f,%d,%d\n", entry.brake_torque,
                  entry.distance, entry.locked ? 1 : 0, entry.stopped ? 1 : 0);
    os << buf;
  }
  std::printf("best brake torque on %s: %.0f N m (coarse %.0f; table -> %s)\n",
              surface_tag_in.c_str(), refined, sweep.best, path.c_str());
}

void cmd_suite(const RunConfig& raw) {
  const RunConfig config = raw.resolved();
  prepare_out_dir(config);
  const MlpModel model = load_model_or_throw(config.model_path());

  const std::vector<Scenario> scenarios = paper_scenarios();
  const SuiteOptions options = suite_options(config, scenarios);
  for (const auto& [tag, tb] : options.brake_torques) {
    std::printf("swept brake torque %s: %.0f N m\n", tag.c_str(), tb);
  }

  const auto open_rows = run_open_loop_suite(scenarios, model, options);
  const auto closed_rows = run_closed_loop_suite(scenarios, model, options);
  write_suite_csv(open_rows, config.out_dir / "open_loop.csv");
  write_suite_csv(closed_rows, config.out_dir / "closed_loop.csv");

  // Reporting bands: single-surface open-loop MLP quality, the directional
  // MLP-vs-RLS comparison, and the closed-loop MLP/SMC distances against the
  // published table values.
  int failures = 0;
  const auto check = [&](bool ok, const std::string& label, double value) {
    std::printf("[%s] %s (%.4f)\n", ok ? "PASS" : "FAIL", label.c_str(),
                value);
    if (!ok) ++failures;
  };

  const auto open_rmse = [&](const std::string& scenario,
                             const std::string& estimator) {
    for (const auto& row : open_rows) {
      if (row.scenario == scenario && row.estimator == estimator) {
        return row.metrics.rmse_lambda_star;
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  check(open_rmse("D", "MLP") <= 0.05, "open-loop MLP RMSE on D <= 0.05",
        open_rmse("D", "MLP"));
  check(open_rmse("W", "MLP") <= 0.05, "open-loop MLP RMSE on W <= 0.05",
        open_rmse("W", "MLP"));

  int mlp_wins = 0;
  for (const Scenario& scenario : scenarios) {
    if (open_rmse(scenario.name, "MLP") < open_rmse(scenario.name, "RLS")) {
      ++mlp_wins;
    }
  }
  check(mlp_wins >= 10, "open-loop MLP beats RLS on >= 10 of 15 scenarios",
        mlp_wins);

  const auto closed_distance = [&](const std::string& scenario) {
    for (const auto& row : closed_rows) {
      if (row.scenario == scenario && row.estimator == "MLP" &&
          row.controller == "SMC") {
        return row.metrics.distance;
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  const auto within = [](double value, double target, double rel) {
    return std::abs(value - target) <= rel * target;
  };
  check(within(closed_distance("D"), 280.516, 0.03),
        "closed-loop MLP/SMC distance on D within 3% of 280.5 m",
        closed_distance("D"));
  check(within(closed_distance("W"), 405.912, 0.03),
        "closed-loop MLP/SMC distance on W within 3% of 405.9 m",
        closed_distance("W"));
  check(within(closed_distance("S"), 1740.0, 0.05),
        "closed-loop MLP/SMC distance on S within 5% of 1740 m",
        closed_distance("S"));

  std::printf("suite tables -> %s, %s\n",
              (config.out_dir / "open_loop.csv").c_str(),
              (config.out_dir / "closed_loop.csv").c_str());
  if (failures > 0) {
    throw BandFailure(std::to_string(failures) + " reporting band(s) missed");
  }
}

}  // namespace optslip::cli
