#include "optslip/sensing.hpp"

#include <stdexcept>

#include "optslip/vehicle.hpp"

namespace optslip {

SlipMuPair invert_measurements(double v, double omega, double omega_prev,
                               double Tw, const VehicleParams& vp, double dt,
                               double v_min) {
  if (!(v > v_min)) {
    throw std::domain_error("measurement inversion is singular at v <= " +
                            std::to_string(v_min));
  }
  if (!(dt > 0.0)) {
    throw std::domain_error("dt must be positive");
  }
  // The backward difference estimates the angular acceleration at the middle
  // of the step, so the slip is taken there as well; this keeps the pair on
  // the friction curve instead of half a step off it during transients.
  const double lambda =
      slip_from_speeds(v, 0.5 * (omega + omega_prev), vp.radius);
  const double domega = (omega - omega_prev) / dt;
  const double mu_hat =
      (vp.inertia * domega + Tw) / (vp.radius * vp.mass * vp.gravity);
  return SlipMuPair{lambda, mu_hat};
}

SlipMuPair add_noise(const SlipMuPair& pair, double sigma, Rng& rng) {
  if (sigma == 0.0) return pair;
  return SlipMuPair{pair.lambda, pair.mu + sigma * rng.normal()};
}

WindowBuffer::WindowBuffer(std::size_t capacity) : capacity_(capacity) {
  pairs_.reserve(capacity);
}

std::optional<std::vector<double>> WindowBuffer::push(const SlipMuPair& pair) {
  if (pairs_.size() < capacity_) {
    pairs_.push_back(pair);
  } else {
    pairs_[head_] = pair;
    head_ = (head_ + 1) % capacity_;
  }
  if (!full()) return std::nullopt;
  std::vector<double> features(2 * capacity_);
  for (std::size_t i = 0; i < capacity_; ++i) {
    const SlipMuPair& p = pairs_[(head_ + i) % capacity_];
    features[2 * i] = p.lambda;
    features[2 * i + 1] = p.mu;
  }
  return features;
}

}  // namespace optslip
