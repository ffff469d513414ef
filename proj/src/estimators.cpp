#include "optslip/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace optslip {

MlpEstimator::MlpEstimator(const MlpModel& model, int window_size,
                           double hold_value)
    : model_(model),
      buffer_(static_cast<std::size_t>(window_size)),
      estimate_(hold_value) {}

void MlpEstimator::observe(const SlipMuPair& pair) {
  if (auto window = buffer_.push(pair)) {
    estimate_ = std::clamp(forward(model_, *window), 0.01, 0.99);
  }
}

RlsEstimator::RlsEstimator(const RlsEstimatorConfig& config, double hold_value)
    : config_(config),
      state_(rls_init(config.initial_covariance_scale, config.forgetting)),
      estimate_(hold_value) {}

void RlsEstimator::observe(const SlipMuPair& pair) {
  if (any_accepted_ &&
      std::abs(pair.lambda - last_accepted_lambda_) < config_.novelty_gate) {
    return;
  }
  const double forgetting = state_.forgetting;
  if (state_.covariance.trace() > config_.covariance_trace_cap) {
    state_.forgetting = 1.0;
  }
  state_ = rls_update(state_, config_.basis, pair);
  state_.forgetting = forgetting;
  last_accepted_lambda_ = pair.lambda;
  any_accepted_ = true;

  const RlsEstimate est = rls_optimal_slip(state_, config_.basis);
  if (est.identified) estimate_ = est.lambda_star;
}

}  // namespace optslip
