#pragma once

#include <string>
#include <string_view>

namespace optslip {

// One road surface in the Burckhardt friction family
//   mu(lambda) = beta1 * (1 - exp(-beta2 * lambda)) - beta3 * lambda.
//
// Validity requires beta1, beta2, beta3 > 0, a positive initial slope
// (beta1*beta2 > beta3) and an interior peak, i.e. the closed-form optimal
// slip log(beta1*beta2/beta3)/beta2 must lie in (0, 1).
struct FrictionParams {
  double beta1 = 0.0;  // friction magnitude, dimensionless
  double beta2 = 0.0;  // shape factor, 1/slip
  double beta3 = 0.0;  // linear decay coefficient, dimensionless

  static FrictionParams make(double beta1, double beta2, double beta3);
  static bool valid(double beta1, double beta2, double beta3);
};

struct OptimalPoint {
  double lambda_star = 0.0;  // slip at the friction peak, in (0, 1)
  double mu_star = 0.0;      // peak friction coefficient
};

enum class Surface { Dry, Wet, Snow };

// Friction coefficient at slip lambda. Throws std::domain_error outside [0,1].
double mu(const FrictionParams& params, double lambda);

// Analytic d(mu)/d(lambda). Throws std::domain_error outside [0,1].
double mu_slope(const FrictionParams& params, double lambda);

// Closed-form peak of the friction curve. Throws std::domain_error when the
// stationary point falls outside (0, 1).
OptimalPoint optimal_slip(const FrictionParams& params);

// The three published reference surfaces.
FrictionParams reference_surface(Surface surface);

// Parses a surface tag "D", "W" or "S". Throws std::invalid_argument.
Surface parse_surface_tag(std::string_view tag);
std::string surface_tag(Surface surface);

}  // namespace optslip
