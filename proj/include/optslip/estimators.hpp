#pragma once

#include <string>

#include "optslip/mlp.hpp"
#include "optslip/rls.hpp"
#include "optslip/sensing.hpp"
#include "optslip/vehicle.hpp"

namespace optslip {

// Windowed MLP estimator: buffers the last P pairs and, once the buffer is
// full, predicts on every new pair. Predictions are clamped to [0.01, 0.99]
// before use as a set-point.
class MlpEstimator : public SlipEstimator {
 public:
  MlpEstimator(const MlpModel& model, int window_size, double hold_value);

  void observe(const SlipMuPair& pair) override;
  double estimate() const override { return estimate_; }
  std::string name() const override { return "MLP"; }

 private:
  MlpModel model_;
  WindowBuffer buffer_;
  double estimate_;
};

struct RlsEstimatorConfig {
  RlsBasis basis;
  double forgetting = 0.995;
  double initial_covariance_scale = 1e3;
  // Reconstruction stabilizers: pairs are only consumed when the slip moved
  // by at least `novelty_gate` since the last accepted pair, and forgetting
  // is suspended once the covariance trace exceeds `covariance_trace_cap`
  // (otherwise unexcited directions blow up exponentially on steady data).
  double novelty_gate = 5e-4;
  double covariance_trace_cap = 4e4;
};

// The recursive-least-squares baseline behind the common estimator interface.
class RlsEstimator : public SlipEstimator {
 public:
  RlsEstimator(const RlsEstimatorConfig& config, double hold_value);

  void observe(const SlipMuPair& pair) override;
  double estimate() const override { return estimate_; }
  std::string name() const override { return "RLS"; }

  const RlsState& state() const { return state_; }

 private:
  RlsEstimatorConfig config_;
  RlsState state_;
  double estimate_;
  double last_accepted_lambda_ = -1.0;
  bool any_accepted_ = false;
};

}  // namespace optslip
