#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "optslip/rng.hpp"

namespace optslip {

struct VehicleParams;

struct SlipMuPair {
  double lambda = 0.0;  // slip in [0, 1]
  double mu = 0.0;      // friction coefficient estimate
};

struct NoiseConfig {
  double sigma = 0.0;  // stddev of additive white Gaussian noise on mu
  std::uint64_t seed = 0;
};

// Recovers a (lambda, mu) pair from one step of speed measurements by
// inverting the wheel equation J*domega/dt = r*Fx - Tw with a backward
// difference for the angular acceleration. Tw is the torque actually
// transmitted to the wheel. Throws std::domain_error when v <= v_min.
SlipMuPair invert_measurements(double v, double omega, double omega_prev,
                               double Tw, const VehicleParams& vp, double dt,
                               double v_min);

// Adds N(0, sigma^2) noise to mu; lambda is left untouched. With sigma == 0
// the pair is returned unchanged and no draw is consumed.
SlipMuPair add_noise(const SlipMuPair& pair, double sigma, Rng& rng);

// FIFO of the most recent P pairs. Once full, every push yields the flattened
// feature vector (lambda_1, mu_1, ..., lambda_P, mu_P) in acquisition order.
class WindowBuffer {
 public:
  explicit WindowBuffer(std::size_t capacity);

  std::optional<std::vector<double>> push(const SlipMuPair& pair);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return pairs_.size(); }
  bool full() const { return pairs_.size() == capacity_; }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // index of the oldest pair once full
  std::vector<SlipMuPair> pairs_;
};

}  // namespace optslip
