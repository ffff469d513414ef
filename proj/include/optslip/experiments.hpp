#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optslip/estimators.hpp"
#include "optslip/mlp.hpp"
#include "optslip/vehicle.hpp"

namespace optslip {

// One braking scenario: up to three surfaces, switched when the vehicle
// speed first crosses 2/3 and 1/3 of the initial speed.
struct Scenario {
  std::string name;            // e.g. "D->S->D"
  std::vector<Surface> tags;   // 1 to 3 segments

  SurfacePlan plan(double v0) const;
};

// The paper's test set: the three single surfaces plus all twelve ordered
// transitions with distinct neighbors, in table order.
std::vector<Scenario> paper_scenarios();
Scenario scenario_from_name(const std::string& name);

struct Metrics {
  double rmse_lambda_star = 0.0;
  double distance = 0.0;      // m
  double braking_time = 0.0;  // s
};

// sqrt(mean((gt - est)^2)), both series including the hold phase before the
// first estimator output. Throws std::domain_error on empty or mismatched
// input.
double rmse_series(std::span<const double> gt, std::span<const double> est);

struct TorqueSweepEntry {
  double brake_torque = 0.0;
  double distance = 0.0;
  bool locked = false;
  bool stopped = false;
};

struct TorqueSweepResult {
  double best = 0.0;
  std::vector<TorqueSweepEntry> entries;
};

// Open-loop distance sweep over candidate brake torques; returns the
// candidate with the shortest stopping distance among the runs that stop
// without ever locking the wheel. Throws std::runtime_error when no
// candidate qualifies.
TorqueSweepResult sweep_brake_torque(const FrictionParams& surface,
                                     std::span<const double> grid,
                                     const ManeuverConfig& base);

std::vector<double> default_torque_grid();

// Coarse sweep over `grid` followed by a 1 N m pass around the winner. The
// shortest-distance torque sits just below the lock threshold, so the fine
// pass matters: it parks the open-loop equilibrium essentially at the
// friction peak.
double swept_brake_torque_refined(const FrictionParams& surface,
                                  std::span<const double> grid,
                                  const ManeuverConfig& base);

struct SuiteRow {
  std::string scenario;
  std::string estimator;   // "MLP" or "RLS"
  std::string controller;  // "none", "PI" or "SMC"
  Metrics metrics;
};

struct SuiteOptions {
  ManeuverConfig base;              // vehicle, dt, v0, noise, seed, gains
  RlsEstimatorConfig rls;
  int window_size = 50;
  double estimator_hold = 0.10;
  std::map<std::string, double> brake_torques;  // per surface tag, from sweep
};

// Open loop: one maneuver per scenario, both estimators observing the same
// measurement stream. A scenario whose estimator fails is reported with NaN
// metrics and the suite continues.
std::vector<SuiteRow> run_open_loop_suite(std::span<const Scenario> scenarios,
                                          const MlpModel& model,
                                          const SuiteOptions& options);

// Closed loop: scenarios x {MLP, RLS} x {PI, SMC}, the active estimator
// feeding the controller set-point.
std::vector<SuiteRow> run_closed_loop_suite(std::span<const Scenario> scenarios,
                                            const MlpModel& model,
                                            const SuiteOptions& options);

void write_suite_csv(std::span<const SuiteRow> rows,
                     const std::filesystem::path& path);

}  // namespace optslip
