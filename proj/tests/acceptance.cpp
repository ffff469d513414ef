// Acceptance suite: runs every release criterion end to end at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exits nonzero when
// any criterion fails.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "optslip/cli.hpp"
#include "optslip/config.hpp"
#include "optslip/experiments.hpp"
#include "optslip/mlp.hpp"
#include "oracles.hpp"

using namespace optslip;
namespace fs = std::filesystem;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point start) {
  return std::chrono::duration<double>(clk::now() - start).count();
}

struct Criterion {
  int id;
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<Criterion> g_results;

void record(int id, const std::string& name, bool pass,
            const std::string& detail) {
  g_results.push_back({id, name, pass, detail});
  std::printf("[%s] %2d. %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

std::string read_bytes(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("missing file " + path.string());
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_optimum_oracle() {
  const auto start = clk::now();
  Rng rng(2024);
  const FrictionCube cube;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const FrictionParams p = oracles::random_valid_params(rng, cube);
    const double closed = optimal_slip(p).lambda_star;
    const double gridded = oracles::grid_argmax_slip(p, 1000);
    worst = std::max(worst, std::abs(closed - gridded));
  }
  const double elapsed = seconds_since(start);
  record(1, "closed-form optimum matches 1000-point grid argmax",
         worst < 1e-3 && elapsed < 1.0,
         fmt("worst |diff| %.2e over 1000 cube samples in %.2f s", worst,
             elapsed));
}

void criterion_2_reference_optima() {
  struct Expect {
    Surface tag;
    double lambda, mu;
  };
  const Expect expected[] = {{Surface::Dry, 0.170, 1.170},
                             {Surface::Wet, 0.131, 0.801},
                             {Surface::Snow, 0.060, 0.190}};
  bool ok = true;
  std::string detail;
  for (const auto& e : expected) {
    const FrictionParams p = reference_surface(e.tag);
    const OptimalPoint opt = optimal_slip(p);
    const double grid = oracles::grid_argmax_slip(p, 1000);
    ok = ok && std::abs(opt.lambda_star - e.lambda) <= 0.002 &&
         std::abs(opt.mu_star - e.mu) <= 0.002 &&
         std::abs(opt.lambda_star - grid) < 1e-3;
    detail += fmt("%s:(%.4f,%.4f) ", surface_tag(e.tag).c_str(),
                  opt.lambda_star, opt.mu_star);
  }
  record(2, "reference-surface optima within ±0.002", ok, detail);
}

struct SweptTorques {
  std::map<std::string, double> by_tag;
};

SweptTorques criterion_3_distances(const RunConfig& config) {
  SweptTorques swept;
  const auto grid = config.sweep_grid();
  const ManeuverConfig base = config.base_maneuver();
  for (Surface tag : {Surface::Dry, Surface::Wet, Surface::Snow}) {
    swept.by_tag[surface_tag(tag)] =
        swept_brake_torque_refined(reference_surface(tag), grid, base);
  }

  struct Band {
    Surface tag;
    double lo, hi, paper;
  };
  // dry: ideal bound 278.8 m to +3%; wet: 407.1 m ± 3%; snow: 1716 m ± 5%.
  // Each bracket must also contain the published distance.
  const Band bands[] = {
      {Surface::Dry, 278.8, 287.2, 280.516},
      {Surface::Wet, 407.1 * 0.97, 407.1 * 1.03, 405.912},
      {Surface::Snow, 1716.0 * 0.95, 1716.0 * 1.05, 1740.0},
  };
  bool ok = true;
  std::string detail;
  for (const Band& band : bands) {
    ManeuverConfig run = base;
    run.plan = SurfacePlan::single(reference_surface(band.tag));
    run.brake_request = swept.by_tag[surface_tag(band.tag)];
    run.controller = ControllerKind::Smc;
    run.estimator = EstimatorKind::None;  // ground-truth set-point
    const auto start = clk::now();
    const ManeuverLog log = run_maneuver(run);
    const double elapsed = seconds_since(start);
    const bool in_band = log.distance >= band.lo && log.distance <= band.hi;
    const bool contains_paper = band.paper >= band.lo && band.paper <= band.hi;
    ok = ok && in_band && contains_paper && elapsed < 5.0;
    detail += fmt("%s:%.1fm in [%.1f,%.1f] (%.2fs) ",
                  surface_tag(band.tag).c_str(), log.distance, band.lo,
                  band.hi, elapsed);
  }
  record(3, "closed-loop ground-truth distances inside the physics bands", ok,
         detail);
  return swept;
}

struct TrainedArtifacts {
  DatasetSplits splits;
  MlpModel model;
};

TrainedArtifacts criterion_4_mlp_quality(const RunConfig& config) {
  TrainedArtifacts artifacts;
  const auto start = clk::now();
  artifacts.splits = build_dataset(config.dataset);
  const MlpModel initial = init_model(config.mlp_dims(), config.seed);
  const TrainReport report =
      train(initial, artifacts.splits, config.training);
  artifacts.model = report.model;
  const double train_seconds = seconds_since(start);

  const double test_rmse =
      evaluate_rmse(artifacts.model, artifacts.splits.test.features,
                    artifacts.splits.test.labels);

  // reference windows, built on the fly with the dataset noise level
  Eigen::MatrixXd ref_features;
  Eigen::VectorXd ref_labels;
  {
    std::vector<LabeledSample> samples;
    Rng root(config.seed, 0x72656673);
    int stream = 0;
    for (Surface s : {Surface::Dry, Surface::Wet, Surface::Snow}) {
      const FrictionParams params = reference_surface(s);
      Rng rng = root.fork(static_cast<std::uint64_t>(stream++));
      const auto curve =
          discretize_curve(params, config.dataset.curve_points);
      const auto windows = extract_windows(
          curve, config.dataset.window_size, config.dataset.stride,
          config.dataset.sigma, rng, optimal_slip(params).lambda_star);
      samples.insert(samples.end(), windows.begin(), windows.end());
    }
    ref_features.resize(static_cast<Eigen::Index>(samples.size()),
                        2 * config.dataset.window_size);
    ref_labels.resize(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
      for (int c = 0; c < 2 * config.dataset.window_size; ++c) {
        ref_features(static_cast<Eigen::Index>(i), c) =
            samples[i].features[static_cast<std::size_t>(c)];
      }
      ref_labels[static_cast<Eigen::Index>(i)] = samples[i].label;
    }
  }
  const double ref_rmse =
      evaluate_rmse(artifacts.model, ref_features, ref_labels);

  record(4, "MLP held-out and reference RMSE at most 0.06",
         test_rmse <= 0.06 && ref_rmse <= 0.06 && train_seconds <= 900.0,
         fmt("test %.4f, reference %.4f, trained in %.0f s (best epoch %d)",
             test_rmse, ref_rmse, train_seconds, report.best_epoch));
  return artifacts;
}

void criterion_5_gradient_check() {
  const auto start = clk::now();
  double worst = 0.0;
  Rng seeds(99);
  int done = 0;
  while (done < 20) {
    Rng rng(seeds.next_u64());
    const std::vector<int> dims{8, 10, 9, 1};
    MlpModel model = init_model(dims, rng.next_u64());
    std::vector<double> x(8);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    const double target = rng.uniform();

    // skip configurations with a pre-activation near a ReLU kink
    bool near_kink = false;
    {
      Eigen::VectorXd a = Eigen::Map<Eigen::VectorXd>(x.data(), 8);
      for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Eigen::VectorXd z = model.weights[l] * a + model.biases[l];
        if (l + 2 < dims.size() && z.cwiseAbs().minCoeff() < 1e-6) {
          near_kink = true;
        }
        a = (l + 2 < dims.size()) ? z.cwiseMax(0.0).eval() : z;
      }
    }
    if (near_kink) continue;
    ++done;

    const MlpGradients grads = backward(model, x, target);
    const double h = 1e-5;
    const auto loss = [&](const MlpModel& m) {
      const double out = forward(m, x);
      return 0.5 * (out - target) * (out - target);
    };
    const auto probe = [&](double analytic, double numeric) {
      worst = std::max(worst,
                       std::abs(analytic - numeric) /
                           std::max({std::abs(analytic), std::abs(numeric),
                                     1e-2}));
    };
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
      for (Eigen::Index r = 0; r < model.weights[l].rows(); ++r) {
        for (Eigen::Index col = 0; col < model.weights[l].cols(); ++col) {
          MlpModel plus = model, minus = model;
          plus.weights[l](r, col) += h;
          minus.weights[l](r, col) -= h;
          probe(grads.d_weights[l](r, col),
                (loss(plus) - loss(minus)) / (2.0 * h));
        }
        MlpModel plus = model, minus = model;
        plus.biases[l][r] += h;
        minus.biases[l][r] -= h;
        probe(grads.d_biases[l][r], (loss(plus) - loss(minus)) / (2.0 * h));
      }
    }
  }
  const double elapsed = seconds_since(start);
  record(5, "backprop matches central differences on 20 seeded cases",
         worst < 1e-4 && elapsed < 10.0,
         fmt("worst relative error %.2e in %.1f s", worst, elapsed));
}

struct OpenLoopRuns {
  std::vector<Scenario> scenarios;
  std::vector<ManeuverLog> logs;  // MLP then RLS observer series
};

OpenLoopRuns run_open_loop_for_criteria(const RunConfig& config,
                                        const SweptTorques& swept,
                                        const MlpModel& model) {
  OpenLoopRuns runs;
  runs.scenarios = paper_scenarios();
  for (const Scenario& scenario : runs.scenarios) {
    ManeuverConfig maneuver = config.base_maneuver();
    maneuver.plan = scenario.plan(config.v0);
    maneuver.brake_request =
        swept.by_tag.at(surface_tag(scenario.tags.front()));
    MlpEstimator mlp(model, config.dataset.window_size,
                     config.estimator_hold);
    RlsEstimator rls(config.rls, config.estimator_hold);
    std::array<SlipEstimator*, 2> observers{&mlp, &rls};
    runs.logs.push_back(run_maneuver(maneuver, nullptr, observers));
  }
  return runs;
}

void criterion_6_open_loop(const OpenLoopRuns& runs) {
  int wins = 0;
  double rmse_d = -1.0, rmse_w = -1.0;
  for (std::size_t i = 0; i < runs.scenarios.size(); ++i) {
    const ManeuverLog& log = runs.logs[i];
    std::vector<double> gt;
    gt.reserve(log.rows.size());
    for (const auto& row : log.rows) gt.push_back(row.lambda_star_gt);
    const double mlp_rmse = rmse_series(gt, log.observer_estimates[0]);
    const double rls_rmse = rmse_series(gt, log.observer_estimates[1]);
    if (mlp_rmse < rls_rmse) ++wins;
    if (runs.scenarios[i].name == "D") rmse_d = mlp_rmse;
    if (runs.scenarios[i].name == "W") rmse_w = mlp_rmse;
  }
  record(6, "open-loop MLP quality and directional win over RLS",
         rmse_d <= 0.05 && rmse_w <= 0.05 && wins >= 10,
         fmt("RMSE D %.4f (<=0.05), W %.4f (<=0.05), MLP wins %d/15 (>=10)",
             rmse_d, rmse_w, wins));
}

void criterion_7_transition_recovery(const OpenLoopRuns& runs, int window) {
  bool ok = true;
  std::string detail;
  int checked_switches = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < runs.scenarios.size(); ++i) {
    if (runs.scenarios[i].tags.size() < 2) continue;
    const ManeuverLog& log = runs.logs[i];
    const auto& est = log.observer_estimates[0];  // MLP
    std::string per_switch;
    for (std::size_t sw : log.switch_rows) {
      // the window holds exactly the first P new-surface pairs here
      const std::size_t at = sw + static_cast<std::size_t>(window) - 1;
      if (at >= log.rows.size()) continue;
      const double err = std::abs(est[at] - log.rows[at].lambda_star_gt);
      ++checked_switches;
      worst = std::max(worst, err);
      if (err >= 0.03) ok = false;
      per_switch += fmt("%.3f ", err);
    }
    detail += fmt("%s:[%s] ", runs.scenarios[i].name.c_str(),
                  per_switch.c_str());
  }
  std::printf("    |MLP - gt| at P updates after each switch:\n    %s\n",
              detail.c_str());
  record(7, "MLP within 0.03 of the optimum P updates after every switch",
         ok && checked_switches > 0,
         fmt("%d switches checked, worst error %.3f (< 0.03 required)",
             checked_switches, worst));
}

void criterion_8_determinism(const RunConfig& config, const MlpModel& model,
                             const SweptTorques& swept, const fs::path& dir) {
  bool ok = true;
  std::string detail;

  // gen-data and train at reduced scale through the command layer
  RunConfig toy = config;
  toy.dataset.n_diag = 6;
  toy.dataset.n_hyp = 10;
  toy.dataset.curve_points = 300;
  toy.dataset.window_size = 20;
  toy.dataset.stride = 10;
  toy.training.epochs = 3;
  toy.hidden_layers = {32, 32};
  for (const char* which : {"a", "b"}) {
    toy.out_dir = dir / "determinism" / which;
    cli::cmd_gen_data(toy);
    cli::cmd_train(toy, {});
  }
  const bool gen_same = read_bytes(dir / "determinism/a/dataset.csv") ==
                        read_bytes(dir / "determinism/b/dataset.csv");
  const bool train_same =
      read_bytes(dir / "determinism/a/model.json") ==
          read_bytes(dir / "determinism/b/model.json") &&
      read_bytes(dir / "determinism/a/train_report.csv") ==
          read_bytes(dir / "determinism/b/train_report.csv");
  ok = ok && gen_same && train_same;
  detail += fmt("gen-data %s, train %s, ", gen_same ? "identical" : "DIFFERS",
                train_same ? "identical" : "DIFFERS");

  // full suites twice with the real model
  SuiteOptions options;
  options.base = config.base_maneuver();
  options.rls = config.rls;
  options.window_size = config.dataset.window_size;
  options.estimator_hold = config.estimator_hold;
  options.brake_torques = swept.by_tag;
  const auto scenarios = paper_scenarios();
  for (const char* which : {"a", "b"}) {
    const fs::path out = dir / "determinism" / which;
    write_suite_csv(run_open_loop_suite(scenarios, model, options),
                    out / "open_loop.csv");
    write_suite_csv(run_closed_loop_suite(scenarios, model, options),
                    out / "closed_loop.csv");
  }
  const bool suite_same =
      read_bytes(dir / "determinism/a/open_loop.csv") ==
          read_bytes(dir / "determinism/b/open_loop.csv") &&
      read_bytes(dir / "determinism/a/closed_loop.csv") ==
          read_bytes(dir / "determinism/b/closed_loop.csv");
  ok = ok && suite_same;
  detail += fmt("suite %s", suite_same ? "identical" : "DIFFERS");
  record(8, "seeded reruns produce byte-identical outputs", ok, detail);
}

void criterion_9_rls_recovery() {
  const RlsBasis basis;
  // exact recovery after m linearly independent noiseless samples
  const Eigen::Vector4d theta_true(0.7, -0.25, 0.2, -0.15);
  RlsState state = rls_init(1e12, 1.0);
  for (double lambda : {0.03, 0.12, 0.4, 0.85}) {
    state = rls_update(state, basis,
                       SlipMuPair{lambda, theta_true.dot(basis.phi(lambda))});
  }
  const double recovery_err = (state.theta - theta_true).cwiseAbs().maxCoeff();

  // recursive vs direct weighted least squares on 20 samples
  Rng rng(314);
  double equivalence_err = 0.0;
  for (double forgetting : {1.0, 0.97}) {
    RlsState rec = rls_init(1000.0, forgetting);
    std::vector<SlipMuPair> data;
    for (int k = 0; k < 20; ++k) {
      const SlipMuPair pair{rng.uniform(), rng.normal(0.4, 0.2)};
      data.push_back(pair);
      rec = rls_update(rec, basis, pair);
    }
    const Eigen::Vector4d batch = oracles::batch_weighted_least_squares(
        basis, data, forgetting, 1000.0);
    equivalence_err = std::max(equivalence_err,
                               (rec.theta - batch).cwiseAbs().maxCoeff());
  }
  record(9, "RLS exact recovery and batch least-squares equivalence",
         recovery_err < 1e-8 && equivalence_err < 1e-8,
         fmt("recovery %.2e, recursive-vs-batch %.2e (both < 1e-8)",
             recovery_err, equivalence_err));
}

void criterion_10_slip_dynamics(const RunConfig& config,
                                const SweptTorques& swept) {
  bool ok = true;
  std::string detail;
  for (const Scenario& scenario : paper_scenarios()) {
    ManeuverConfig maneuver = config.base_maneuver();
    maneuver.plan = scenario.plan(config.v0);
    maneuver.brake_request =
        swept.by_tag.at(surface_tag(scenario.tags.front()));
    maneuver.measurement_noise_sigma = 0.0;
    const ManeuverLog log = run_maneuver(maneuver);

    // Eligible steps sit away from switches and the wheel-lock clamp, move
    // at a meaningful slip rate, and have a local mode slow enough for the
    // dt-resolution central difference: tau = v/(A g |mu'|) >= 25 dt.
    const VehicleParams& vp = maneuver.vehicle;
    const double geom = 1.0 + vp.mass * vp.radius * vp.radius / vp.inertia;
    const auto active_surface = [&](std::size_t i) -> const FrictionParams& {
      std::size_t active = 0;
      for (std::size_t sw : log.switch_rows) {
        if (i >= sw) ++active;
      }
      return maneuver.plan.surfaces[active];
    };
    std::vector<std::size_t> eligible;
    for (std::size_t i = 1; i + 1 < log.rows.size(); ++i) {
      bool near_switch = false;
      for (std::size_t sw : log.switch_rows) {
        if (i + 2 >= sw && i <= sw + 1) near_switch = true;
      }
      if (near_switch) continue;
      const auto& row = log.rows[i];
      if (log.rows[i - 1].omega == 0.0 || row.omega == 0.0 ||
          log.rows[i + 1].omega == 0.0) {
        continue;
      }
      const FrictionParams& surface = active_surface(i);
      const double rhs =
          slip_dynamics_rhs(row.lambda, row.v, vp, surface, row.Tw);
      const double tau =
          row.v / (geom * vp.gravity *
                   std::max(1e-9, std::abs(mu_slope(surface, row.lambda))));
      if (std::abs(rhs) >= 0.05 && tau >= 25.0 * maneuver.dt) {
        eligible.push_back(i);
      }
    }
    if (eligible.size() < 100) {
      ok = false;
      detail += fmt("%s:only-%zu-eligible ", scenario.name.c_str(),
                    eligible.size());
      continue;
    }
    double worst = 0.0;
    const std::size_t stride = eligible.size() / 100;
    int checked = 0;
    for (std::size_t k = 0; k < eligible.size() && checked < 100;
         k += stride) {
      const std::size_t i = eligible[k];
      const FrictionParams& surface = active_surface(i);
      const double fd = (log.rows[i + 1].lambda - log.rows[i - 1].lambda) /
                        (2.0 * maneuver.dt);
      const double rhs = slip_dynamics_rhs(log.rows[i].lambda, log.rows[i].v,
                                           vp, surface, log.rows[i].Tw);
      worst = std::max(worst, std::abs(fd - rhs) / std::abs(rhs));
      ++checked;
    }
    if (worst >= 1e-3) ok = false;
    detail += fmt("%s:%.1e ", scenario.name.c_str(), worst);
  }
  record(10, "slip-state dynamics match the integrated trajectories", ok,
         detail);
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "optslip_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  RunConfig config = RunConfig{}.resolved();  // release defaults, seeded
  config.out_dir = dir;

  const auto t0 = clk::now();
  try {
    criterion_1_optimum_oracle();
    criterion_2_reference_optima();
    const SweptTorques swept = criterion_3_distances(config);
    criterion_5_gradient_check();
    criterion_9_rls_recovery();
    criterion_10_slip_dynamics(config, swept);
    const TrainedArtifacts artifacts = criterion_4_mlp_quality(config);
    const OpenLoopRuns runs =
        run_open_loop_for_criteria(config, swept, artifacts.model);
    criterion_6_open_loop(runs);
    criterion_7_transition_recovery(runs, config.dataset.window_size);
    criterion_8_determinism(config, artifacts.model, swept, dir);
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }

  int failures = 0;
  for (const auto& result : g_results) {
    if (!result.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed in %.0f s\n",
              static_cast<int>(g_results.size()) - failures, g_results.size(),
              seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
