#include "optslip/control.hpp"

#include <stdexcept>
#include <utility>

namespace optslip {

std::pair<double, SmcState> smc_step(const SmcState& state, double lambda_ref,
                                     double lambda, const SmcGains& gains,
                                     double dt) {
  if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
  const double e = lambda - lambda_ref;
  const double s_c = e + gains.k0 * state.sigma;
  const double s_sat = sat(s_c / gains.epsilon);
  const double u = std::clamp(0.5 - gains.beta_gain * s_sat, 0.0, 1.0);
  SmcState next = state;
  next.sigma += dt * (-gains.k0 * state.sigma + gains.epsilon * s_sat);
  return {u, next};
}

std::pair<double, PiState> pi_step(const PiState& state, double lambda_ref,
                                   double lambda, const PiGains& gains,
                                   double dt) {
  if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
  const double e = lambda_ref - lambda;
  const double u_raw = 0.5 + gains.kp * e + gains.ki * state.integral;
  const double u = std::clamp(u_raw, 0.0, 1.0);
  PiState next = state;
  if (u == u_raw) next.integral += dt * e;  // freeze while saturated
  return {u, next};
}

}  // namespace optslip
