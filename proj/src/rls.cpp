#include "optslip/rls.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace optslip {

Eigen::Vector4d RlsBasis::phi(double lambda) const {
  Eigen::Vector4d out;
  for (int i = 0; i < 3; ++i) {
    out[i] = 1.0 - std::exp(-rates[static_cast<std::size_t>(i)] * lambda);
  }
  out[3] = lambda;
  return out;
}

RlsState rls_init(double initial_covariance_scale, double forgetting) {
  if (!(initial_covariance_scale > 0.0)) {
    throw std::invalid_argument("initial covariance scale must be positive");
  }
  if (!(forgetting > 0.0 && forgetting <= 1.0)) {
    throw std::invalid_argument("forgetting factor must lie in (0, 1]");
  }
  RlsState state;
  state.theta.setZero();
  state.covariance = initial_covariance_scale * Eigen::Matrix4d::Identity();
  state.forgetting = forgetting;
  return state;
}

RlsState rls_update(const RlsState& state, const RlsBasis& basis,
                    const SlipMuPair& pair) {
  const Eigen::Vector4d phi = basis.phi(pair.lambda);
  const double f = state.forgetting;
  const Eigen::Vector4d Pphi = state.covariance * phi;
  const double denom = f + phi.dot(Pphi);
  const Eigen::Vector4d gain = Pphi / denom;

  RlsState next = state;
  next.theta += gain * (pair.mu - phi.dot(state.theta));
  next.covariance = (state.covariance - gain * Pphi.transpose()) / f;
  next.covariance = 0.5 * (next.covariance + next.covariance.transpose()).eval();
  return next;
}

RlsEstimate rls_optimal_slip(const RlsState& state, const RlsBasis& basis,
                             int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("grid needs >= 2 points");
  if (state.theta.isZero(0.0)) {
    return RlsEstimate{0.01, false};
  }
  double best_lambda = 0.0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    const double lambda =
        static_cast<double>(i) / static_cast<double>(grid_points - 1);
    const double value = state.theta.dot(basis.phi(lambda));
    if (value > best_value) {
      best_value = value;
      best_lambda = lambda;
    }
  }
  return RlsEstimate{std::clamp(best_lambda, 0.01, 0.99), true};
}

std::string rls_to_json(const RlsState& state) {
  nlohmann::json j;
  j["theta"] = std::vector<double>(state.theta.data(), state.theta.data() + 4);
  std::vector<std::vector<double>> cov(4, std::vector<double>(4));
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) cov[r][c] = state.covariance(r, c);
  }
  j["covariance"] = cov;
  j["forgetting"] = state.forgetting;
  return j.dump(2);
}

}  // namespace optslip
