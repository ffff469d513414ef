#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "optslip/control.hpp"
#include "optslip/friction.hpp"
#include "optslip/sensing.hpp"

namespace optslip {

struct VehicleParams {
  double mass = 1600.0;     // kg
  double inertia = 0.45;    // kg m^2
  double radius = 0.3;      // m
  double gravity = 9.81;    // m/s^2

  static VehicleParams make(double mass, double inertia, double radius,
                            double gravity);
};

struct SimState {
  double t = 0.0;      // s
  double v = 0.0;      // vehicle speed, m/s
  double omega = 0.0;  // wheel angular speed, rad/s
  double x = 0.0;      // traveled distance, m
};

struct Derivatives {
  double dv = 0.0;      // m/s^2
  double domega = 0.0;  // rad/s^2
};

// Longitudinal slip 1 - r*omega/v, clamped to [0, 1].
// Throws std::domain_error when v <= 0.
double slip_from_speeds(double v, double omega, double radius);

// Right-hand side of the quarter-car model
//   M dv/dt = -Fx,  J domega/dt = r Fx - Tw,  Fx = mu(lambda) M g.
Derivatives qcm_derivatives(const SimState& state, const VehicleParams& vp,
                            const FrictionParams& surface, double Tw);

// Slip-state form of the same dynamics:
//   dlambda/dt = -(1/v) [(1-lambda) + M r^2/J] g mu(lambda) + r Tw/(J v).
double slip_dynamics_rhs(double lambda, double v, const VehicleParams& vp,
                         const FrictionParams& surface, double Tw);

// One classical RK4 step. The wheel speed is clamped at zero (locked wheel)
// and may spin up again when the road torque exceeds the brake torque;
// v is clamped at zero as well. Distance integrates v through the stages.
SimState step(const SimState& state, const VehicleParams& vp,
              const FrictionParams& surface, double Tw, double dt);

// Piecewise-constant surface plan. Segments switch either at fixed times or
// when the vehicle speed first drops below per-segment thresholds.
struct SurfacePlan {
  enum class Mode { ByTime, BySpeed };

  std::vector<FrictionParams> surfaces;
  Mode mode = Mode::ByTime;
  // ByTime: start time of segment i (marks[0] must be 0, strictly
  // increasing). BySpeed: segment i+1 activates once v <= marks[i].
  std::vector<double> marks;

  static SurfacePlan single(const FrictionParams& surface);
  static SurfacePlan by_time(std::vector<FrictionParams> surfaces,
                             std::vector<double> start_times);
  static SurfacePlan by_speed(std::vector<FrictionParams> surfaces,
                              std::vector<double> thresholds);

  std::size_t active_index(double t, double v, std::size_t current) const;
};

enum class EstimatorKind { None, Mlp, Rls };
enum class ControllerKind { None, Pi, Smc };

struct ManeuverConfig {
  VehicleParams vehicle;
  SurfacePlan plan;
  double brake_request = 0.0;  // Tb, N m
  double dt = 1e-3;            // s
  double v0 = 80.0;            // m/s
  double v_stop = 1.0;         // m/s
  double measurement_noise_sigma = 0.005;
  std::uint64_t seed = 0;
  EstimatorKind estimator = EstimatorKind::None;
  ControllerKind controller = ControllerKind::None;
  SmcGains smc;
  PiGains pi;
  double estimator_hold = 0.10;  // set-point before the first estimate
  long max_steps = 400000;
};

struct ManeuverRow {
  double t, v, omega, x;
  double lambda;           // slip after this step
  double mu_true;          // friction coefficient of the active surface
  double lambda_star_gt;   // optimal slip of the active surface
  double lambda_star_est;  // estimator output (or set-point in use)
  double u;                // controller output applied this step
  double Tw;               // commanded brake torque this step
};

struct ManeuverLog {
  std::vector<ManeuverRow> rows;
  std::vector<std::size_t> switch_rows;  // first row index of segments 1..n-1
  bool wheel_locked = false;             // omega hit zero at some step
  double distance = 0.0;                 // x at the v_stop crossing
  double braking_time = 0.0;             // t at the v_stop crossing
  // Per-row estimates of each passive observer, aligned with `rows`.
  std::vector<std::vector<double>> observer_estimates;

  void write_csv(const std::filesystem::path& path, int decimation = 1) const;
};

// Online estimator fed by the sensing chain during a maneuver.
class SlipEstimator {
 public:
  virtual ~SlipEstimator() = default;
  virtual void observe(const SlipMuPair& pair) = 0;
  virtual double estimate() const = 0;  // hold value until enough data
  virtual std::string name() const = 0;
};

// Integrates the quarter-car model from v0 down to v_stop. The controller
// scales the brake request (u = 1 when absent, i.e. open loop); estimators
// are fed (lambda, mu) pairs recovered from the measured speeds and the
// torque transmitted to the wheel. `extra_observers` receive the same pair
// stream without influencing the control loop.
ManeuverLog run_maneuver(const ManeuverConfig& config,
                         SlipEstimator* estimator = nullptr,
                         std::span<SlipEstimator* const> extra_observers = {});

}  // namespace optslip
