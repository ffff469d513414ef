#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "optslip/sensing.hpp"

namespace optslip {

// Linearly parametrized friction approximation for the recursive
// least-squares baseline: mu(lambda) ~ theta^T phi(lambda) with
//   phi(lambda) = [1 - e^(-a1*lambda), 1 - e^(-a2*lambda),
//                  1 - e^(-a3*lambda), lambda].
// The shape constants span the beta2 range of the friction cube.
struct RlsBasis {
  std::array<double, 3> rates{10.0, 30.0, 90.0};

  static constexpr int size() { return 4; }
  Eigen::Vector4d phi(double lambda) const;
};

struct RlsState {
  Eigen::Vector4d theta = Eigen::Vector4d::Zero();
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
  double forgetting = 1.0;
};

struct RlsEstimate {
  double lambda_star = 0.0;
  bool identified = false;  // false while theta is still the zero vector
};

// theta = 0, covariance = scale * I. Throws std::invalid_argument for
// scale <= 0 or forgetting outside (0, 1].
RlsState rls_init(double initial_covariance_scale, double forgetting);

// One exponentially-weighted RLS update with regressor phi(lambda) and
// observation mu. The covariance is re-symmetrized after the rank-one
// downdate.
RlsState rls_update(const RlsState& state, const RlsBasis& basis,
                    const SlipMuPair& pair);

// Grid argmax of the fitted curve over [0, 1], clamped to [0.01, 0.99].
RlsEstimate rls_optimal_slip(const RlsState& state, const RlsBasis& basis,
                             int grid_points = 1000);

// Debug dump of theta/covariance/forgetting as a JSON string.
std::string rls_to_json(const RlsState& state);

}  // namespace optslip
