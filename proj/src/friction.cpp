#include "optslip/friction.hpp"

#include <cmath>
#include <stdexcept>

namespace optslip {

namespace {

void check_slip_range(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::domain_error("slip must lie in [0, 1], got " +
                            std::to_string(lambda));
  }
}

double closed_form_lambda_star(double beta1, double beta2, double beta3) {
  return std::log(beta1 * beta2 / beta3) / beta2;
}

}  // namespace

bool FrictionParams::valid(double beta1, double beta2, double beta3) {
  if (!(beta1 > 0.0 && beta2 > 0.0 && beta3 > 0.0)) return false;
  if (!(beta1 * beta2 > beta3)) return false;
  const double ls = closed_form_lambda_star(beta1, beta2, beta3);
  return ls > 0.0 && ls < 1.0;
}

FrictionParams FrictionParams::make(double beta1, double beta2, double beta3) {
  if (!valid(beta1, beta2, beta3)) {
    throw std::invalid_argument(
        "invalid Burckhardt parameters (" + std::to_string(beta1) + ", " +
        std::to_string(beta2) + ", " + std::to_string(beta3) +
        "): need positive coefficients, beta1*beta2 > beta3 and an interior "
        "friction peak");
  }
  return FrictionParams{beta1, beta2, beta3};
}

double mu(const FrictionParams& p, double lambda) {
  check_slip_range(lambda);
  return p.beta1 * (1.0 - std::exp(-p.beta2 * lambda)) - p.beta3 * lambda;
}

double mu_slope(const FrictionParams& p, double lambda) {
  check_slip_range(lambda);
  return p.beta1 * p.beta2 * std::exp(-p.beta2 * lambda) - p.beta3;
}

OptimalPoint optimal_slip(const FrictionParams& p) {
  const double ls = closed_form_lambda_star(p.beta1, p.beta2, p.beta3);
  if (!(ls > 0.0 && ls < 1.0)) {
    throw std::domain_error("surface has no interior friction peak");
  }
  return OptimalPoint{ls, mu(p, ls)};
}

FrictionParams reference_surface(Surface surface) {
  switch (surface) {
    case Surface::Dry:
      return FrictionParams{1.2801, 23.99, 0.52};
    case Surface::Wet:
      return FrictionParams{0.857, 33.822, 0.347};
    case Surface::Snow:
      return FrictionParams{0.1946, 94.129, 0.0646};
  }
  throw std::invalid_argument("unknown surface");
}

Surface parse_surface_tag(std::string_view tag) {
  if (tag == "D") return Surface::Dry;
  if (tag == "W") return Surface::Wet;
  if (tag == "S") return Surface::Snow;
  throw std::invalid_argument("unknown surface tag '" + std::string(tag) +
                              "', expected D, W or S");
}

std::string surface_tag(Surface surface) {
  switch (surface) {
    case Surface::Dry:
      return "D";
    case Surface::Wet:
      return "W";
    case Surface::Snow:
      return "S";
  }
  throw std::invalid_argument("unknown surface");
}

}  // namespace optslip
