#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace optslip {

struct DatasetSplits;

// Fully-connected ReLU regressor mapping a flattened slip-friction window to
// the optimal slip. The reference architecture is [2P, 250, 250, 1] with
// ReLU on the hidden layers and an identity output.
struct MlpModel {
  std::vector<int> dims;                  // e.g. {100, 250, 250, 1}
  std::vector<Eigen::MatrixXd> weights;   // weights[l] is dims[l+1] x dims[l]
  std::vector<Eigen::VectorXd> biases;    // biases[l] has dims[l+1] entries

  int input_size() const { return dims.empty() ? 0 : dims.front(); }
};

struct MlpGradients {
  std::vector<Eigen::MatrixXd> d_weights;
  std::vector<Eigen::VectorXd> d_biases;
};

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 15;
  int batch_size = 32;  // 1 = pure stochastic
  std::uint64_t seed = 0;
  bool shuffle = true;
};

struct TrainReport {
  std::vector<double> train_mse;        // one entry per epoch
  std::vector<double> validation_rmse;  // one entry per epoch
  int best_epoch = -1;                  // epoch of the returned model
  MlpModel model;                       // weights at the best validation epoch
};

// He-style initialization: weights ~ N(0, 2/fan_in), biases zero.
MlpModel init_model(const std::vector<int>& dims, std::uint64_t seed);

// Scalar prediction. Throws std::invalid_argument on a wrong input length.
double forward(const MlpModel& model, std::span<const double> features);

// Batched predictions; rows of `inputs` are samples.
Eigen::VectorXd forward_batch(const MlpModel& model,
                              const Eigen::MatrixXd& inputs);

// Exact gradients of the squared-error loss 1/2 (yhat - y)^2 with respect to
// every weight and bias.
MlpGradients backward(const MlpModel& model, std::span<const double> features,
                      double target);

// Minibatch SGD on the mean squared error with a seeded per-epoch shuffle.
// Keeps the weights from the epoch with the best validation RMSE. Throws
// std::runtime_error (with the epoch index) if the loss turns non-finite.
TrainReport train(const MlpModel& model, const DatasetSplits& splits,
                  const TrainConfig& config);

// sqrt(mean((yhat - y)^2)) over feature/label arrays. Throws on empty input.
double evaluate_rmse(const MlpModel& model, const Eigen::MatrixXd& features,
                     const Eigen::VectorXd& labels);

void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace optslip
