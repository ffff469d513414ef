#include "optslip/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "optslip/rng.hpp"

namespace optslip {

VehicleParams VehicleParams::make(double mass, double inertia, double radius,
                                  double gravity) {
  if (!(mass > 0.0 && inertia > 0.0 && radius > 0.0 && gravity > 0.0)) {
    throw std::invalid_argument("vehicle parameters must be positive");
  }
  return VehicleParams{mass, inertia, radius, gravity};
}

double slip_from_speeds(double v, double omega, double radius) {
  if (!(v > 0.0)) {
    throw std::domain_error("slip is singular at v <= 0");
  }
  return std::clamp(1.0 - radius * omega / v, 0.0, 1.0);
}

Derivatives qcm_derivatives(const SimState& state, const VehicleParams& vp,
                            const FrictionParams& surface, double Tw) {
  const double lambda = slip_from_speeds(state.v, state.omega, vp.radius);
  const double Fx = mu(surface, lambda) * vp.mass * vp.gravity;
  return Derivatives{-Fx / vp.mass, (vp.radius * Fx - Tw) / vp.inertia};
}

double slip_dynamics_rhs(double lambda, double v, const VehicleParams& vp,
                         const FrictionParams& surface, double Tw) {
  if (!(v > 0.0)) {
    throw std::domain_error("slip dynamics are singular at v <= 0");
  }
  const double geom =
      (1.0 - lambda) + vp.mass * vp.radius * vp.radius / vp.inertia;
  return -geom * vp.gravity * mu(surface, lambda) / v +
         vp.radius * Tw / (vp.inertia * v);
}

SimState step(const SimState& state, const VehicleParams& vp,
              const FrictionParams& surface, double Tw, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("dt must be positive");

  // Derivatives with the wheel clamp applied inside the stage evaluation.
  const auto f = [&](double v, double omega) -> Derivatives {
    SimState s;
    s.v = std::max(v, 1e-12);
    s.omega = std::max(omega, 0.0);
    return qcm_derivatives(s, vp, surface, Tw);
  };

  const Derivatives k1 = f(state.v, state.omega);
  const Derivatives k2 =
      f(state.v + 0.5 * dt * k1.dv, state.omega + 0.5 * dt * k1.domega);
  const Derivatives k3 =
      f(state.v + 0.5 * dt * k2.dv, state.omega + 0.5 * dt * k2.domega);
  const Derivatives k4 = f(state.v + dt * k3.dv, state.omega + dt * k3.domega);

  SimState next;
  next.t = state.t + dt;
  next.v = state.v + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
  next.omega = state.omega + dt / 6.0 * (k1.domega + 2.0 * k2.domega +
                                         2.0 * k3.domega + k4.domega);
  // x' = v integrated through the same stages.
  next.x = state.x + dt / 6.0 *
                         (state.v + 2.0 * (state.v + 0.5 * dt * k1.dv) +
                          2.0 * (state.v + 0.5 * dt * k2.dv) +
                          (state.v + dt * k3.dv));
  next.v = std::max(next.v, 0.0);
  next.omega = std::max(next.omega, 0.0);
  return next;
}

SurfacePlan SurfacePlan::single(const FrictionParams& surface) {
  SurfacePlan plan;
  plan.surfaces = {surface};
  plan.mode = Mode::ByTime;
  plan.marks = {0.0};
  return plan;
}

SurfacePlan SurfacePlan::by_time(std::vector<FrictionParams> surfaces,
                                 std::vector<double> start_times) {
  if (surfaces.empty() || surfaces.size() != start_times.size()) {
    throw std::invalid_argument("schedule needs one start time per surface");
  }
  if (start_times.front() != 0.0) {
    throw std::invalid_argument("first segment must start at t = 0");
  }
  for (std::size_t i = 1; i < start_times.size(); ++i) {
    if (!(start_times[i] > start_times[i - 1])) {
      throw std::invalid_argument("segment start times must increase");
    }
  }
  SurfacePlan plan;
  plan.surfaces = std::move(surfaces);
  plan.mode = Mode::ByTime;
  plan.marks = std::move(start_times);
  return plan;
}

SurfacePlan SurfacePlan::by_speed(std::vector<FrictionParams> surfaces,
                                  std::vector<double> thresholds) {
  if (surfaces.empty() || thresholds.size() + 1 != surfaces.size()) {
    throw std::invalid_argument(
        "speed-switched plan needs one threshold per transition");
  }
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] < thresholds[i - 1])) {
      throw std::invalid_argument("speed thresholds must decrease");
    }
  }
  SurfacePlan plan;
  plan.surfaces = std::move(surfaces);
  plan.mode = Mode::BySpeed;
  plan.marks = std::move(thresholds);
  return plan;
}

std::size_t SurfacePlan::active_index(double t, double v,
                                      std::size_t current) const {
  std::size_t idx = current;
  if (mode == Mode::ByTime) {
    while (idx + 1 < surfaces.size() && t >= marks[idx + 1]) ++idx;
  } else {
    while (idx + 1 < surfaces.size() && v <= marks[idx]) ++idx;
  }
  return idx;
}

void ManeuverLog::write_csv(const std::filesystem::path& path,
                            int decimation) const {
  if (decimation < 1) throw std::invalid_argument("decimation must be >= 1");
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open log file for writing: " +
                             path.string());
  }
  os << "t,v,omega,x,lambda,mu_true,lambda_gt,lambda_est,u,Tw\n";
  char buf[256];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i % static_cast<std::size_t>(decimation) != 0 && i + 1 != rows.size())
      continue;
    const auto& r = rows[i];
    std::snprintf(buf, sizeof(buf),
                  "%.6f,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", r.t,
                  r.v, r.omega, r.x, r.lambda, r.mu_true, r.lambda_star_gt,
                  r.lambda_star_est, r.u, r.Tw);
    os << buf;
  }
  if (!os) {
    throw std::runtime_error("failed writing log file: " + path.string());
  }
}

ManeuverLog run_maneuver(const ManeuverConfig& config, SlipEstimator* estimator,
                         std::span<SlipEstimator* const> extra_observers) {
  if (!(config.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(config.v_stop > 0.0 && config.v_stop < config.v0)) {
    throw std::invalid_argument("need 0 < v_stop < v0");
  }
  if (!(config.measurement_noise_sigma >= 0.0)) {
    throw std::invalid_argument("noise sigma must be >= 0");
  }
  if (config.plan.surfaces.empty()) {
    throw std::invalid_argument("surface plan is empty");
  }

  const VehicleParams& vp = config.vehicle;
  Rng rng(config.seed, 0x6d616e65);

  // Null initial slip: the wheel rolls freely at touchdown.
  SimState state;
  state.v = config.v0;
  state.omega = config.v0 / vp.radius;

  std::size_t segment = 0;
  auto segment_optimum = [&](std::size_t idx) {
    return optimal_slip(config.plan.surfaces[idx]).lambda_star;
  };
  double lambda_gt = segment_optimum(0);

  SmcState smc_state;
  PiState pi_state;

  // With no estimator the set-point falls back to the ground truth, which is
  // what the physics-bound closed-loop runs use.
  const auto current_estimate = [&]() {
    return estimator != nullptr ? estimator->estimate() : lambda_gt;
  };

  ManeuverLog log;
  log.rows.reserve(4096);
  log.observer_estimates.resize(extra_observers.size());
  const auto record_observers = [&]() {
    for (std::size_t i = 0; i < extra_observers.size(); ++i) {
      log.observer_estimates[i].push_back(extra_observers[i]->estimate());
    }
  };
  {
    ManeuverRow row{};
    row.t = 0.0;
    row.v = state.v;
    row.omega = state.omega;
    row.x = 0.0;
    row.lambda = slip_from_speeds(state.v, state.omega, vp.radius);
    row.mu_true = mu(config.plan.surfaces[0], row.lambda);
    row.lambda_star_gt = lambda_gt;
    row.lambda_star_est = current_estimate();
    row.u = 0.0;
    row.Tw = 0.0;
    log.rows.push_back(row);
    record_observers();
  }

  double omega_prev = state.omega;
  bool stopped = false;

  for (long k = 0; k < config.max_steps && !stopped; ++k) {
    const std::size_t next_segment =
        config.plan.active_index(state.t, state.v, segment);
    if (next_segment != segment) {
      segment = next_segment;
      lambda_gt = segment_optimum(segment);
      log.switch_rows.push_back(log.rows.size());
    }
    const FrictionParams& surface = config.plan.surfaces[segment];

    const double lambda = slip_from_speeds(state.v, state.omega, vp.radius);

    double u = 1.0;
    const double set_point = std::clamp(current_estimate(), 0.01, 0.99);
    switch (config.controller) {
      case ControllerKind::None:
        u = 1.0;
        break;
      case ControllerKind::Smc: {
        auto [u_out, next_state] =
            smc_step(smc_state, set_point, lambda, config.smc, config.dt);
        u = u_out;
        smc_state = next_state;
        break;
      }
      case ControllerKind::Pi: {
        auto [u_out, next_state] =
            pi_step(pi_state, set_point, lambda, config.pi, config.dt);
        u = u_out;
        pi_state = next_state;
        break;
      }
    }

    const double Tw_cmd = config.brake_request * u;
    const SimState next = step(state, vp, surface, Tw_cmd, config.dt);

    const bool locked = next.omega == 0.0;
    log.wheel_locked = log.wheel_locked || locked;

    if (next.v > config.v_stop) {
      // A locked wheel transmits only the torque the road can hold; that is
      // what a brake-side load cell would report.
      double Tw_sensed = Tw_cmd;
      if (locked) {
        const double lambda_locked =
            slip_from_speeds(next.v, next.omega, vp.radius);
        Tw_sensed =
            vp.radius * mu(surface, lambda_locked) * vp.mass * vp.gravity;
      }
      SlipMuPair pair =
          invert_measurements(next.v, next.omega, omega_prev, Tw_sensed, vp,
                              config.dt, config.v_stop);
      pair = add_noise(pair, config.measurement_noise_sigma, rng);
      if (estimator != nullptr) estimator->observe(pair);
      for (SlipEstimator* obs : extra_observers) {
        if (obs != nullptr) obs->observe(pair);
      }
    } else {
      stopped = true;
    }

    ManeuverRow row{};
    row.t = next.t;
    row.v = next.v;
    row.omega = next.omega;
    row.x = next.x;
    row.lambda = next.v > 0.0
                     ? slip_from_speeds(next.v, next.omega, vp.radius)
                     : 1.0;
    row.mu_true = mu(surface, row.lambda);
    row.lambda_star_gt = lambda_gt;
    row.lambda_star_est = current_estimate();
    row.u = u;
    row.Tw = Tw_cmd;
    log.rows.push_back(row);
    record_observers();

    omega_prev = next.omega;
    state = next;
  }

  if (!stopped) {
    throw std::runtime_error(
        "maneuver did not reach v_stop within max_steps (is the brake "
        "request zero?)");
  }
  log.distance = state.x;
  log.braking_time = state.t;
  return log;
}

}  // namespace optslip
