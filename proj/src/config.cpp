#include "optslip/config.hpp"

#include <fstream>

#include "json.hpp"

namespace optslip {

using nlohmann::json;

RunConfig RunConfig::resolved() const {
  RunConfig r = *this;
  r.dataset.seed = r.seed;
  r.training.seed = r.seed;
  return r;
}

ManeuverConfig RunConfig::base_maneuver() const {
  ManeuverConfig m;
  m.vehicle = vehicle;
  m.dt = dt;
  m.v0 = v0;
  m.v_stop = v_stop;
  m.measurement_noise_sigma = runtime_noise_sigma;
  m.seed = seed;
  m.smc = smc;
  m.pi = pi;
  m.estimator_hold = estimator_hold;
  m.max_steps = max_steps;
  return m;
}

std::vector<double> RunConfig::sweep_grid() const {
  std::vector<double> grid;
  for (double tb = sweep_min; tb <= sweep_max + 1e-9; tb += sweep_step) {
    grid.push_back(tb);
  }
  return grid;
}

std::vector<int> RunConfig::mlp_dims() const {
  std::vector<int> dims;
  dims.push_back(2 * dataset.window_size);
  for (int h : hidden_layers) dims.push_back(h);
  dims.push_back(1);
  return dims;
}

namespace {

json interval_json(const Interval& iv) { return json{iv.lo, iv.hi}; }

Interval interval_from(const json& j) {
  return Interval{j.at(0).get<double>(), j.at(1).get<double>()};
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string config_to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir.string();
  j["dataset"] = {
      {"cube",
       {{"b1", interval_json(c.dataset.cube.b1)},
        {"b2", interval_json(c.dataset.cube.b2)},
        {"b3", interval_json(c.dataset.cube.b3)}}},
      {"n_diag", c.dataset.n_diag},
      {"n_hyp", c.dataset.n_hyp},
      {"window_size", c.dataset.window_size},
      {"stride", c.dataset.stride},
      {"curve_points", c.dataset.curve_points},
      {"sigma", c.dataset.sigma},
      {"split_ratios", c.dataset.split_ratios},
  };
  j["training"] = {
      {"learning_rate", c.training.learning_rate},
      {"epochs", c.training.epochs},
      {"batch_size", c.training.batch_size},
      {"shuffle", c.training.shuffle},
  };
  j["mlp"] = {{"hidden_layers", c.hidden_layers}};
  j["vehicle"] = {
      {"mass", c.vehicle.mass},
      {"inertia", c.vehicle.inertia},
      {"radius", c.vehicle.radius},
      {"gravity", c.vehicle.gravity},
  };
  j["simulation"] = {
      {"dt", c.dt},
      {"v0", c.v0},
      {"v_stop", c.v_stop},
      {"runtime_noise_sigma", c.runtime_noise_sigma},
      {"estimator_hold", c.estimator_hold},
      {"max_steps", c.max_steps},
      {"log_decimation", c.log_decimation},
  };
  j["smc"] = {{"beta_gain", c.smc.beta_gain},
              {"k0", c.smc.k0},
              {"epsilon", c.smc.epsilon}};
  j["pi"] = {{"kp", c.pi.kp}, {"ki", c.pi.ki}};
  j["rls"] = {
      {"rates", c.rls.basis.rates},
      {"forgetting", c.rls.forgetting},
      {"initial_covariance_scale", c.rls.initial_covariance_scale},
      {"novelty_gate", c.rls.novelty_gate},
      {"covariance_trace_cap", c.rls.covariance_trace_cap},
  };
  j["sweep"] = {{"min", c.sweep_min}, {"max", c.sweep_max},
                {"step", c.sweep_step}};
  return j.dump(2);
}

RunConfig config_from_json(const std::string& text) {
  RunConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed config: ") + e.what());
  }
  try {
    maybe(j, "seed", c.seed);
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("dataset")) {
      const json& d = j.at("dataset");
      if (d.contains("cube")) {
        const json& cube = d.at("cube");
        if (cube.contains("b1")) c.dataset.cube.b1 = interval_from(cube["b1"]);
        if (cube.contains("b2")) c.dataset.cube.b2 = interval_from(cube["b2"]);
        if (cube.contains("b3")) c.dataset.cube.b3 = interval_from(cube["b3"]);
      }
      maybe(d, "n_diag", c.dataset.n_diag);
      maybe(d, "n_hyp", c.dataset.n_hyp);
      maybe(d, "window_size", c.dataset.window_size);
      maybe(d, "stride", c.dataset.stride);
      maybe(d, "curve_points", c.dataset.curve_points);
      maybe(d, "sigma", c.dataset.sigma);
      maybe(d, "split_ratios", c.dataset.split_ratios);
    }
    if (j.contains("training")) {
      const json& t = j.at("training");
      maybe(t, "learning_rate", c.training.learning_rate);
      maybe(t, "epochs", c.training.epochs);
      maybe(t, "batch_size", c.training.batch_size);
      maybe(t, "shuffle", c.training.shuffle);
    }
    if (j.contains("mlp")) maybe(j.at("mlp"), "hidden_layers", c.hidden_layers);
    if (j.contains("vehicle")) {
      const json& v = j.at("vehicle");
      maybe(v, "mass", c.vehicle.mass);
      maybe(v, "inertia", c.vehicle.inertia);
      maybe(v, "radius", c.vehicle.radius);
      maybe(v, "gravity", c.vehicle.gravity);
    }
    if (j.contains("simulation")) {
      const json& s = j.at("simulation");
      maybe(s, "dt", c.dt);
      maybe(s, "v0", c.v0);
      maybe(s, "v_stop", c.v_stop);
      maybe(s, "runtime_noise_sigma", c.runtime_noise_sigma);
      maybe(s, "estimator_hold", c.estimator_hold);
      maybe(s, "max_steps", c.max_steps);
      maybe(s, "log_decimation", c.log_decimation);
    }
    if (j.contains("smc")) {
      const json& s = j.at("smc");
      maybe(s, "beta_gain", c.smc.beta_gain);
      maybe(s, "k0", c.smc.k0);
      maybe(s, "epsilon", c.smc.epsilon);
    }
    if (j.contains("pi")) {
      const json& p = j.at("pi");
      maybe(p, "kp", c.pi.kp);
      maybe(p, "ki", c.pi.ki);
    }
    if (j.contains("rls")) {
      const json& r = j.at("rls");
      maybe(r, "rates", c.rls.basis.rates);
      maybe(r, "forgetting", c.rls.forgetting);
      maybe(r, "initial_covariance_scale", c.rls.initial_covariance_scale);
      maybe(r, "novelty_gate", c.rls.novelty_gate);
      maybe(r, "covariance_trace_cap", c.rls.covariance_trace_cap);
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      maybe(s, "min", c.sweep_min);
      maybe(s, "max", c.sweep_max);
      maybe(s, "step", c.sweep_step);
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open config file: " + path.string());
  }
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return config_from_json(text);
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open config file for writing: " +
                             path.string());
  }
  os << config_to_json(config) << '\n';
}

}  // namespace optslip
