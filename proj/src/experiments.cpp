#include "optslip/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace optslip {

SurfacePlan Scenario::plan(double v0) const {
  std::vector<FrictionParams> surfaces;
  surfaces.reserve(tags.size());
  for (Surface tag : tags) surfaces.push_back(reference_surface(tag));
  if (surfaces.size() == 1) return SurfacePlan::single(surfaces.front());
  std::vector<double> thresholds;
  if (surfaces.size() >= 2) thresholds.push_back(2.0 / 3.0 * v0);
  if (surfaces.size() >= 3) thresholds.push_back(1.0 / 3.0 * v0);
  return SurfacePlan::by_speed(std::move(surfaces), std::move(thresholds));
}

std::vector<Scenario> paper_scenarios() {
  const auto make = [](std::vector<Surface> tags) {
    Scenario s;
    s.tags = std::move(tags);
    std::string name;
    for (std::size_t i = 0; i < s.tags.size(); ++i) {
      if (i > 0) name += "->";
      name += surface_tag(s.tags[i]);
    }
    s.name = name;
    return s;
  };
  using enum Surface;
  return {
      make({Dry}),
      make({Wet}),
      make({Snow}),
      make({Dry, Snow, Dry}),
      make({Snow, Dry, Snow}),
      make({Wet, Dry, Wet}),
      make({Dry, Wet, Dry}),
      make({Wet, Snow, Wet}),
      make({Snow, Wet, Snow}),
      make({Snow, Wet, Dry}),
      make({Wet, Dry, Snow}),
      make({Dry, Snow, Wet}),
      make({Snow, Dry, Wet}),
      make({Wet, Snow, Dry}),
      make({Dry, Wet, Snow}),
  };
}

Scenario scenario_from_name(const std::string& name) {
  Scenario s;
  s.name = name;
  std::string cleaned = name;
  std::size_t pos;
  while ((pos = cleaned.find("->")) != std::string::npos) {
    cleaned.replace(pos, 2, " ");
  }
  std::stringstream ss(cleaned);
  std::string tag;
  while (ss >> tag) s.tags.push_back(parse_surface_tag(tag));
  if (s.tags.empty() || s.tags.size() > 3) {
    throw std::invalid_argument("scenario must have 1 to 3 segments: " + name);
  }
  return s;
}

double rmse_series(std::span<const double> gt, std::span<const double> est) {
  if (gt.empty() || gt.size() != est.size()) {
    throw std::domain_error("series must be nonempty and equally long");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double d = gt[i] - est[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(gt.size()));
}

std::vector<double> default_torque_grid() {
  std::vector<double> grid;
  for (double tb = 100.0; tb <= 12000.0; tb += 25.0) grid.push_back(tb);
  return grid;
}

TorqueSweepResult sweep_brake_torque(const FrictionParams& surface,
                                     std::span<const double> grid,
                                     const ManeuverConfig& base) {
  if (grid.empty()) throw std::invalid_argument("torque grid is empty");
  TorqueSweepResult result;
  result.entries.reserve(grid.size());
  double best_distance = std::numeric_limits<double>::infinity();
  for (double tb : grid) {
    ManeuverConfig config = base;
    config.plan = SurfacePlan::single(surface);
    config.brake_request = tb;
    config.estimator = EstimatorKind::None;
    config.controller = ControllerKind::None;
    config.measurement_noise_sigma = 0.0;

    TorqueSweepEntry entry;
    entry.brake_torque = tb;
    try {
      const ManeuverLog log = run_maneuver(config);
      entry.stopped = true;
      entry.locked = log.wheel_locked;
      entry.distance = log.distance;
      if (!entry.locked && entry.distance < best_distance) {
        best_distance = entry.distance;
        result.best = tb;
      }
    } catch (const std::runtime_error&) {
      entry.stopped = false;  // never reached v_stop
      entry.distance = std::numeric_limits<double>::quiet_NaN();
    }
    result.entries.push_back(entry);
  }
  if (!(best_distance < std::numeric_limits<double>::infinity())) {
    throw std::runtime_error(
        "no brake torque in the grid stops the vehicle without locking");
  }
  return result;
}

double swept_brake_torque_refined(const FrictionParams& surface,
                                  std::span<const double> grid,
                                  const ManeuverConfig& base) {
  const TorqueSweepResult coarse = sweep_brake_torque(surface, grid, base);
  double step = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
  if (step <= 1.0) return coarse.best;
  std::vector<double> fine;
  for (double tb = std::max(1.0, coarse.best - step);
       tb <= coarse.best + step + 1e-9; tb += 1.0) {
    fine.push_back(tb);
  }
  return sweep_brake_torque(surface, fine, base).best;
}

namespace {

double torque_for(const SuiteOptions& options, Surface initial) {
  const std::string tag = surface_tag(initial);
  const auto it = options.brake_torques.find(tag);
  if (it == options.brake_torques.end()) {
    throw std::invalid_argument("no swept brake torque for surface " + tag);
  }
  return it->second;
}

std::vector<double> gt_series(const ManeuverLog& log) {
  std::vector<double> gt;
  gt.reserve(log.rows.size());
  for (const auto& row : log.rows) gt.push_back(row.lambda_star_gt);
  return gt;
}

Metrics metrics_from(const ManeuverLog& log, std::span<const double> est) {
  Metrics m;
  m.rmse_lambda_star = rmse_series(gt_series(log), est);
  m.distance = log.distance;
  m.braking_time = log.braking_time;
  return m;
}

Metrics nan_metrics() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return Metrics{nan, nan, nan};
}

}  // namespace

std::vector<SuiteRow> run_open_loop_suite(std::span<const Scenario> scenarios,
                                          const MlpModel& model,
                                          const SuiteOptions& options) {
  std::vector<SuiteRow> rows;
  for (const Scenario& scenario : scenarios) {
    ManeuverConfig config = options.base;
    config.plan = scenario.plan(config.v0);
    config.brake_request = torque_for(options, scenario.tags.front());
    config.estimator = EstimatorKind::None;
    config.controller = ControllerKind::None;

    try {
      MlpEstimator mlp(model, options.window_size, options.estimator_hold);
      RlsEstimator rls(options.rls, options.estimator_hold);
      std::array<SlipEstimator*, 2> observers{&mlp, &rls};
      const ManeuverLog log = run_maneuver(config, nullptr, observers);

      rows.push_back(SuiteRow{scenario.name, "MLP", "none",
                              metrics_from(log, log.observer_estimates[0])});
      rows.push_back(SuiteRow{scenario.name, "RLS", "none",
                              metrics_from(log, log.observer_estimates[1])});
    } catch (const std::exception&) {
      rows.push_back(SuiteRow{scenario.name, "MLP", "none", nan_metrics()});
      rows.push_back(SuiteRow{scenario.name, "RLS", "none", nan_metrics()});
    }
  }
  return rows;
}

std::vector<SuiteRow> run_closed_loop_suite(std::span<const Scenario> scenarios,
                                            const MlpModel& model,
                                            const SuiteOptions& options) {
  std::vector<SuiteRow> rows;
  for (const Scenario& scenario : scenarios) {
    for (const char* estimator_name : {"MLP", "RLS"}) {
      for (ControllerKind controller : {ControllerKind::Pi,
                                        ControllerKind::Smc}) {
        ManeuverConfig config = options.base;
        config.plan = scenario.plan(config.v0);
        config.brake_request = torque_for(options, scenario.tags.front());
        config.controller = controller;
        const std::string controller_name =
            controller == ControllerKind::Pi ? "PI" : "SMC";
        try {
          std::unique_ptr<SlipEstimator> estimator;
          if (std::string_view(estimator_name) == "MLP") {
            config.estimator = EstimatorKind::Mlp;
            estimator = std::make_unique<MlpEstimator>(
                model, options.window_size, options.estimator_hold);
          } else {
            config.estimator = EstimatorKind::Rls;
            estimator = std::make_unique<RlsEstimator>(
                options.rls, options.estimator_hold);
          }
          const ManeuverLog log = run_maneuver(config, estimator.get());
          std::vector<double> est;
          est.reserve(log.rows.size());
          for (const auto& row : log.rows) est.push_back(row.lambda_star_est);
          rows.push_back(SuiteRow{scenario.name, estimator_name,
                                  controller_name, metrics_from(log, est)});
        } catch (const std::exception&) {
          rows.push_back(SuiteRow{scenario.name, estimator_name,
                                  controller_name, nan_metrics()});
        }
      }
    }
  }
  return rows;
}

void write_suite_csv(std::span<const SuiteRow> rows,
                     const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open suite file for writing: " +
                             path.string());
  }
  os << "scenario,estimator,controller,rmse,distance_m,time_s\n";
  char buf[160];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%.6f,%.4f,%.4f\n",
                  row.scenario.c_str(), row.estimator.c_str(),
                  row.controller.c_str(), row.metrics.rmse_lambda_star,
                  row.metrics.distance, row.metrics.braking_time);
    os << buf;
  }
  if (!os) {
    throw std::runtime_error("failed writing suite file: " + path.string());
  }
}

}  // namespace optslip
