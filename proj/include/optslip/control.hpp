#pragma once

#include <algorithm>

namespace optslip {

// Saturation to [-1, 1].
inline double sat(double x) { return std::clamp(x, -1.0, 1.0); }

// Integral sliding-mode slip regulator. The brake request is scaled by
//   u = 1/2 - beta_gain * sat((e + k0*sigma)/epsilon),
//   sigma' = -k0*sigma + epsilon * sat(s_c/epsilon),
// with the tracking error taken as e = lambda - lambda_ref so that slip
// above the reference releases the brake and slip below it applies more
// torque. Inside the boundary layer sigma integrates e, which removes the
// steady-state error.
struct SmcGains {
  double beta_gain = 0.5;  // switching amplitude, in (0, 0.5]
  double k0 = 5.0;         // integral coefficient, 1/s
  double epsilon = 0.05;   // boundary-layer width
};

struct SmcState {
  double sigma = 0.0;
};

struct ControlOutput {
  double u = 0.0;  // torque scaling in [0, 1]
};

std::pair<double, SmcState> smc_step(const SmcState& state, double lambda_ref,
                                     double lambda, const SmcGains& gains,
                                     double dt);

// PI regulator with the same half-request idle point as the SMC and a
// conditional integrator: the error is accumulated only while the output is
// unsaturated. Here e = lambda_ref - lambda.
struct PiGains {
  double kp = 4.0;
  double ki = 15.0;  // 1/s
};

struct PiState {
  double integral = 0.0;
};

std::pair<double, PiState> pi_step(const PiState& state, double lambda_ref,
                                   double lambda, const PiGains& gains,
                                   double dt);

}  // namespace optslip
