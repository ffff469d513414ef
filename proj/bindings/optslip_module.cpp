#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>

#include "optslip/config.hpp"
#include "optslip/dataset.hpp"
#include "optslip/estimators.hpp"
#include "optslip/experiments.hpp"
#include "optslip/friction.hpp"
#include "optslip/mlp.hpp"
#include "optslip/rls.hpp"
#include "optslip/vehicle.hpp"

namespace py = pybind11;
using namespace optslip;

namespace {

py::dict log_to_dict(const ManeuverLog& log) {
  py::dict out;
  const auto column = [&](auto getter) {
    std::vector<double> values;
    values.reserve(log.rows.size());
    for (const auto& row : log.rows) values.push_back(getter(row));
    return values;
  };
  out["t"] = column([](const ManeuverRow& r) { return r.t; });
  out["v"] = column([](const ManeuverRow& r) { return r.v; });
  out["omega"] = column([](const ManeuverRow& r) { return r.omega; });
  out["x"] = column([](const ManeuverRow& r) { return r.x; });
  out["lambda"] = column([](const ManeuverRow& r) { return r.lambda; });
  out["mu_true"] = column([](const ManeuverRow& r) { return r.mu_true; });
  out["lambda_gt"] =
      column([](const ManeuverRow& r) { return r.lambda_star_gt; });
  out["lambda_est"] =
      column([](const ManeuverRow& r) { return r.lambda_star_est; });
  out["u"] = column([](const ManeuverRow& r) { return r.u; });
  out["Tw"] = column([](const ManeuverRow& r) { return r.Tw; });
  out["distance"] = log.distance;
  out["braking_time"] = log.braking_time;
  out["wheel_locked"] = log.wheel_locked;
  out["switch_rows"] = log.switch_rows;
  out["observer_estimates"] = log.observer_estimates;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quarter-car optimal-slip estimation toolkit";

  py::class_<FrictionParams>(m, "FrictionParams")
      .def(py::init(&FrictionParams::make), py::arg("beta1"), py::arg("beta2"),
           py::arg("beta3"))
      .def_readonly("beta1", &FrictionParams::beta1)
      .def_readonly("beta2", &FrictionParams::beta2)
      .def_readonly("beta3", &FrictionParams::beta3)
      .def("__repr__", [](const FrictionParams& p) {
        return "FrictionParams(" + std::to_string(p.beta1) + ", " +
               std::to_string(p.beta2) + ", " + std::to_string(p.beta3) + ")";
      });

  m.def("reference_surface", [](const std::string& tag) {
    return reference_surface(parse_surface_tag(tag));
  });
  m.def("mu", &mu, py::arg("params"), py::arg("lambda_"));
  m.def("mu_slope", &mu_slope, py::arg("params"), py::arg("lambda_"));
  m.def("optimal_slip", [](const FrictionParams& p) {
    const OptimalPoint opt = optimal_slip(p);
    return py::make_tuple(opt.lambda_star, opt.mu_star);
  });

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Interval::lo)
      .def_readwrite("hi", &Interval::hi);

  py::class_<FrictionCube>(m, "FrictionCube")
      .def(py::init<>())
      .def_readwrite("b1", &FrictionCube::b1)
      .def_readwrite("b2", &FrictionCube::b2)
      .def_readwrite("b3", &FrictionCube::b3);

  m.def("sample_diagonal", &sample_diagonal, py::arg("n"), py::arg("cube"));
  m.def("sample_hypercube", &sample_hypercube, py::arg("n"), py::arg("cube"),
        py::arg("seed"));
  m.def(
      "discretize_curve",
      [](const FrictionParams& p, int n_points) {
        std::vector<std::pair<double, double>> pairs;
        for (const auto& pair : discretize_curve(p, n_points)) {
          pairs.emplace_back(pair.lambda, pair.mu);
        }
        return pairs;
      },
      py::arg("params"), py::arg("n_points"));

  m.def("slip_from_speeds", &slip_from_speeds, py::arg("v"), py::arg("omega"),
        py::arg("radius"));

  py::class_<MlpModel>(m, "MlpModel")
      .def_readonly("dims", &MlpModel::dims)
      .def("forward",
           [](const MlpModel& model, const std::vector<double>& features) {
             return forward(model, features);
           });

  m.def("init_model", &init_model, py::arg("dims"), py::arg("seed"));
  m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
  m.def("load_model", &load_model, py::arg("path"));

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("seed", &RunConfig::seed)
      .def_property(
          "out_dir", [](const RunConfig& c) { return c.out_dir.string(); },
          [](RunConfig& c, const std::string& v) { c.out_dir = v; })
      .def_property(
          "n_diag", [](const RunConfig& c) { return c.dataset.n_diag; },
          [](RunConfig& c, int v) { c.dataset.n_diag = v; })
      .def_property(
          "n_hyp", [](const RunConfig& c) { return c.dataset.n_hyp; },
          [](RunConfig& c, int v) { c.dataset.n_hyp = v; })
      .def_property(
          "window_size",
          [](const RunConfig& c) { return c.dataset.window_size; },
          [](RunConfig& c, int v) { c.dataset.window_size = v; })
      .def_property(
          "stride", [](const RunConfig& c) { return c.dataset.stride; },
          [](RunConfig& c, int v) { c.dataset.stride = v; })
      .def_property(
          "curve_points",
          [](const RunConfig& c) { return c.dataset.curve_points; },
          [](RunConfig& c, int v) { c.dataset.curve_points = v; })
      .def_property(
          "epochs", [](const RunConfig& c) { return c.training.epochs; },
          [](RunConfig& c, int v) { c.training.epochs = v; })
      .def_property(
          "batch_size",
          [](const RunConfig& c) { return c.training.batch_size; },
          [](RunConfig& c, int v) { c.training.batch_size = v; })
      .def_property(
          "learning_rate",
          [](const RunConfig& c) { return c.training.learning_rate; },
          [](RunConfig& c, double v) { c.training.learning_rate = v; })
      .def_property(
          "hidden_layers",
          [](const RunConfig& c) { return c.hidden_layers; },
          [](RunConfig& c, const std::vector<int>& v) {
            c.hidden_layers = v;
          });

  m.def(
      "train_pipeline",
      [](const RunConfig& config_in) {
        RunConfig config = config_in;
        config.dataset.seed = config.seed;
        config.training.seed = config.seed;
        const DatasetSplits splits = build_dataset(config.dataset);
        const MlpModel initial = init_model(config.mlp_dims(), config.seed);
        const TrainReport report = train(initial, splits, config.training);
        py::dict out;
        out["model"] = report.model;
        out["train_mse"] = report.train_mse;
        out["validation_rmse"] = report.validation_rmse;
        out["best_epoch"] = report.best_epoch;
        out["test_rmse"] = evaluate_rmse(report.model, splits.test.features,
                                         splits.test.labels);
        return out;
      },
      py::arg("config"),
      "Build the synthetic dataset and train the regressor; returns the "
      "model and per-epoch metrics.");

  m.def(
      "simulate",
      [](const std::string& scenario_name, double brake_torque,
         const std::string& controller, const MlpModel* model,
         const std::string& estimator, std::uint64_t seed) {
        RunConfig config;
        config.seed = seed;
        ManeuverConfig maneuver = config.base_maneuver();
        const Scenario scenario = scenario_from_name(scenario_name);
        maneuver.plan = scenario.plan(maneuver.v0);
        maneuver.brake_request = brake_torque;
        if (controller == "SMC") {
          maneuver.controller = ControllerKind::Smc;
        } else if (controller == "PI") {
          maneuver.controller = ControllerKind::Pi;
        } else if (controller == "none") {
          maneuver.controller = ControllerKind::None;
        } else {
          throw std::invalid_argument("controller must be none, PI or SMC");
        }

        std::unique_ptr<MlpEstimator> mlp;
        std::unique_ptr<RlsEstimator> rls;
        SlipEstimator* active = nullptr;
        if (estimator == "MLP") {
          if (model == nullptr) {
            throw std::invalid_argument("MLP estimator needs a model");
          }
          mlp = std::make_unique<MlpEstimator>(*model, model->input_size() / 2,
                                               config.estimator_hold);
          active = mlp.get();
        } else if (estimator == "RLS") {
          rls = std::make_unique<RlsEstimator>(config.rls,
                                               config.estimator_hold);
          active = rls.get();
        } else if (estimator != "none") {
          throw std::invalid_argument("estimator must be none, MLP or RLS");
        }
        const ManeuverLog log = run_maneuver(maneuver, active);
        return log_to_dict(log);
      },
      py::arg("scenario"), py::arg("brake_torque"),
      py::arg("controller") = "none", py::arg("model") = nullptr,
      py::arg("estimator") = "none", py::arg("seed") = 20240317,
      "Run one braking maneuver and return its log as plain lists.");

  m.def(
      "sweep_brake_torque",
      [](const std::string& tag, std::vector<double> grid,
         std::uint64_t seed) {
        RunConfig config;
        config.seed = seed;
        const auto result =
            sweep_brake_torque(reference_surface(parse_surface_tag(tag)),
                               grid, config.base_maneuver());
        return result.best;
      },
      py::arg("surface"), py::arg("grid"), py::arg("seed") = 20240317);

  py::class_<RlsBasis>(m, "RlsBasis").def(py::init<>());
  py::class_<RlsState>(m, "RlsState")
      .def_property_readonly("theta", [](const RlsState& s) {
        return std::vector<double>(s.theta.data(), s.theta.data() + 4);
      });
  m.def("rls_init", &rls_init, py::arg("initial_covariance_scale"),
        py::arg("forgetting"));
  m.def(
      "rls_update",
      [](const RlsState& state, const RlsBasis& basis, double lambda,
         double mu_value) {
        return rls_update(state, basis, SlipMuPair{lambda, mu_value});
      },
      py::arg("state"), py::arg("basis"), py::arg("lambda_"), py::arg("mu"));
  m.def(
      "rls_optimal_slip",
      [](const RlsState& state, const RlsBasis& basis) {
        const RlsEstimate est = rls_optimal_slip(state, basis);
        return py::make_tuple(est.lambda_star, est.identified);
      },
      py::arg("state"), py::arg("basis"));

  m.attr("__version__") = "0.1.0";
}
