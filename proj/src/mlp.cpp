#include "optslip/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "optslip/dataset.hpp"
#include "optslip/rng.hpp"

namespace optslip {

namespace {

void check_dims(const std::vector<int>& dims) {
  if (dims.size() < 2) {
    throw std::invalid_argument("network needs at least input and output");
  }
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("layer sizes must be positive");
  }
  if (dims.back() != 1) {
    throw std::invalid_argument("regressor output layer must have size 1");
  }
}

// Hidden activations for one sample; activations[0] is the input.
struct ForwardTrace {
  std::vector<Eigen::VectorXd> activations;
  std::vector<Eigen::VectorXd> pre_activations;
  double output = 0.0;
};

ForwardTrace forward_trace(const MlpModel& model, const Eigen::VectorXd& x) {
  ForwardTrace trace;
  const std::size_t n_layers = model.weights.size();
  trace.activations.reserve(n_layers + 1);
  trace.pre_activations.reserve(n_layers);
  trace.activations.push_back(x);
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l < n_layers; ++l) {
    Eigen::VectorXd z = model.weights[l] * a + model.biases[l];
    trace.pre_activations.push_back(z);
    if (l + 1 < n_layers) {
      a = z.cwiseMax(0.0);  // ReLU on hidden layers
    } else {
      a = z;  // identity output
    }
    trace.activations.push_back(a);
  }
  trace.output = a[0];
  return trace;
}

}  // namespace

MlpModel init_model(const std::vector<int>& dims, std::uint64_t seed) {
  check_dims(dims);
  MlpModel model;
  model.dims = dims;
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const double stddev = std::sqrt(2.0 / fan_in);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        w(r, c) = stddev * rng.normal();
      }
    }
    model.weights.push_back(std::move(w));
    model.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return model;
}

double forward(const MlpModel& model, std::span<const double> features) {
  if (static_cast<int>(features.size()) != model.input_size()) {
    throw std::invalid_argument(
        "feature vector has length " + std::to_string(features.size()) +
        ", expected " + std::to_string(model.input_size()));
  }
  Eigen::VectorXd x =
      Eigen::Map<const Eigen::VectorXd>(features.data(),
                                        static_cast<Eigen::Index>(
                                            features.size()));
  const std::size_t n_layers = model.weights.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    x = (model.weights[l] * x + model.biases[l]).eval();
    if (l + 1 < n_layers) x = x.cwiseMax(0.0);
  }
  return x[0];
}

Eigen::VectorXd forward_batch(const MlpModel& model,
                              const Eigen::MatrixXd& inputs) {
  if (inputs.cols() != model.input_size()) {
    throw std::invalid_argument("feature matrix has wrong width");
  }
  Eigen::MatrixXd a = inputs.transpose();  // columns are samples
  const std::size_t n_layers = model.weights.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    Eigen::MatrixXd z = model.weights[l] * a;
    z.colwise() += model.biases[l];
    if (l + 1 < n_layers) {
      a = z.cwiseMax(0.0);
    } else {
      a = std::move(z);
    }
  }
  return a.row(0).transpose();
}

MlpGradients backward(const MlpModel& model, std::span<const double> features,
                      double target) {
  if (static_cast<int>(features.size()) != model.input_size()) {
    throw std::invalid_argument("feature vector has wrong length");
  }
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
      features.data(), static_cast<Eigen::Index>(features.size()));
  const ForwardTrace trace = forward_trace(model, x);
  const std::size_t n_layers = model.weights.size();

  MlpGradients grads;
  grads.d_weights.resize(n_layers);
  grads.d_biases.resize(n_layers);

  // dL/dz for the output layer of loss 1/2 (yhat - y)^2.
  Eigen::VectorXd delta(1);
  delta[0] = trace.output - target;

  for (std::size_t l = n_layers; l-- > 0;) {
    grads.d_weights[l] = delta * trace.activations[l].transpose();
    grads.d_biases[l] = delta;
    if (l > 0) {
      const Eigen::VectorXd upstream = model.weights[l].transpose() * delta;
      const Eigen::VectorXd& z = trace.pre_activations[l - 1];
      delta = (z.array() > 0.0).select(upstream.array(), 0.0).matrix();
    }
  }
  return grads;
}

TrainReport train(const MlpModel& model, const DatasetSplits& splits,
                  const TrainConfig& config) {
  if (splits.train.size() == 0) {
    throw std::invalid_argument("training split is empty");
  }
  if (!(config.learning_rate > 0.0) && config.learning_rate != 0.0) {
    throw std::invalid_argument("learning rate must be >= 0");
  }
  if (config.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (config.batch_size < 1) {
    throw std::invalid_argument("batch size must be >= 1");
  }

  const Eigen::MatrixXd& X = splits.train.features;
  const Eigen::VectorXd& y = splits.train.labels;
  const Eigen::Index n = X.rows();
  const std::size_t n_layers = model.weights.size();

  MlpModel current = model;
  TrainReport report;
  report.model = model;
  double best_val = std::numeric_limits<double>::infinity();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed, 0x7261696e);

  // Per-layer workspaces reused across batches.
  std::vector<Eigen::MatrixXd> acts(n_layers + 1);
  std::vector<Eigen::MatrixXd> pre(n_layers);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) rng.shuffle(order);

    double loss_sum = 0.0;
    for (Eigen::Index start = 0; start < n;
         start += config.batch_size) {
      const Eigen::Index b =
          std::min<Eigen::Index>(config.batch_size, n - start);

      // Gather the batch (columns are samples).
      Eigen::MatrixXd xb(X.cols(), b);
      Eigen::VectorXd yb(b);
      for (Eigen::Index i = 0; i < b; ++i) {
        const Eigen::Index row = order[static_cast<std::size_t>(start + i)];
        xb.col(i) = X.row(row).transpose();
        yb[i] = y[row];
      }

      acts[0] = std::move(xb);
      for (std::size_t l = 0; l < n_layers; ++l) {
        pre[l] = current.weights[l] * acts[l];
        pre[l].colwise() += current.biases[l];
        if (l + 1 < n_layers) {
          acts[l + 1] = pre[l].cwiseMax(0.0);
        } else {
          acts[l + 1] = pre[l];
        }
      }

      const Eigen::VectorXd residual = acts[n_layers].row(0).transpose() - yb;
      loss_sum += residual.squaredNorm();

      // Mean gradient of (yhat - y)^2 over the batch.
      const double scale = 2.0 / static_cast<double>(b);
      Eigen::MatrixXd delta = residual.transpose() * scale;  // 1 x b
      for (std::size_t l = n_layers; l-- > 0;) {
        const Eigen::MatrixXd dW = delta * acts[l].transpose();
        const Eigen::VectorXd db = delta.rowwise().sum();
        if (l > 0) {
          Eigen::MatrixXd upstream = current.weights[l].transpose() * delta;
          delta = (pre[l - 1].array() > 0.0)
                      .select(upstream.array(), 0.0)
                      .matrix();
        }
        current.weights[l].noalias() -= config.learning_rate * dW;
        current.biases[l] -= config.learning_rate * db;
      }
    }

    const double train_mse = loss_sum / static_cast<double>(n);
    if (!std::isfinite(train_mse)) {
      throw std::runtime_error("training diverged (non-finite loss) at epoch " +
                               std::to_string(epoch));
    }
    report.train_mse.push_back(train_mse);

    double val_rmse = std::numeric_limits<double>::quiet_NaN();
    if (splits.validation.size() > 0) {
      val_rmse = evaluate_rmse(current, splits.validation.features,
                               splits.validation.labels);
    } else {
      val_rmse = std::sqrt(train_mse);
    }
    report.validation_rmse.push_back(val_rmse);
    if (val_rmse < best_val) {
      best_val = val_rmse;
      report.best_epoch = epoch;
      report.model = current;
    }
  }
  return report;
}

double evaluate_rmse(const MlpModel& model, const Eigen::MatrixXd& features,
                     const Eigen::VectorXd& labels) {
  if (features.rows() == 0) {
    throw std::domain_error("cannot evaluate RMSE on an empty sample set");
  }
  if (features.rows() != labels.size()) {
    throw std::invalid_argument("features and labels disagree in length");
  }
  const Eigen::VectorXd pred = forward_batch(model, features);
  return std::sqrt((pred - labels).squaredNorm() /
                   static_cast<double>(labels.size()));
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["dims"] = model.dims;
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& w : model.weights) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < w.cols(); ++c) row.push_back(w(r, c));
      rows.push_back(std::move(row));
    }
    weights.push_back(std::move(rows));
  }
  j["weights"] = std::move(weights);
  nlohmann::json biases = nlohmann::json::array();
  for (const auto& b : model.biases) {
    nlohmann::json vec = nlohmann::json::array();
    for (Eigen::Index i = 0; i < b.size(); ++i) vec.push_back(b[i]);
    biases.push_back(std::move(vec));
  }
  j["biases"] = std::move(biases);

  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open model file for writing: " +
                             path.string());
  }
  os << j.dump() << '\n';
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open model file: " + path.string());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed model file " + path.string() + ": " +
                             e.what());
  }
  MlpModel model;
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw std::runtime_error("unsupported model format version");
    }
    model.dims = j.at("dims").get<std::vector<int>>();
    check_dims(model.dims);
    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    if (weights.size() != model.dims.size() - 1 ||
        biases.size() != model.dims.size() - 1) {
      throw std::runtime_error("layer count mismatch");
    }
    for (std::size_t l = 0; l + 1 < model.dims.size(); ++l) {
      const int rows = model.dims[l + 1];
      const int cols = model.dims[l];
      const auto& wj = weights[l];
      if (static_cast<int>(wj.size()) != rows) {
        throw std::runtime_error("weight matrix shape mismatch");
      }
      Eigen::MatrixXd w(rows, cols);
      for (int r = 0; r < rows; ++r) {
        const auto& row = wj[static_cast<std::size_t>(r)];
        if (static_cast<int>(row.size()) != cols) {
          throw std::runtime_error("weight matrix shape mismatch");
        }
        for (int c = 0; c < cols; ++c) {
          w(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
      }
      const auto& bj = biases[l];
      if (static_cast<int>(bj.size()) != rows) {
        throw std::runtime_error("bias vector shape mismatch");
      }
      Eigen::VectorXd b(rows);
      for (int r = 0; r < rows; ++r) {
        b[r] = bj[static_cast<std::size_t>(r)].get<double>();
      }
      model.weights.push_back(std::move(w));
      model.biases.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed model file " + path.string() + ": " +
                             e.what());
  }
  return model;
}

}  // namespace optslip
