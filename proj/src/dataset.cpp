#include "optslip/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace optslip {

namespace {

constexpr double kReferenceExclusionTol = 1e-3;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct GeneratedCurve {
  int id;
  FrictionParams params;
  double lambda_star;
};

}  // namespace

std::array<double, 3> FrictionCube::diagonal_point(double t) const {
  return {b1.lo + t * (b1.hi - b1.lo), b2.hi + t * (b2.lo - b2.hi),
          b3.lo + t * (b3.hi - b3.lo)};
}

bool FrictionCube::contains(const FrictionParams& p) const {
  return b1.contains(p.beta1) && b2.contains(p.beta2) && b3.contains(p.beta3);
}

std::vector<FrictionParams> sample_diagonal(int n, const FrictionCube& cube) {
  std::vector<FrictionParams> out;
  if (n <= 0) return out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t =
        n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
    const auto [b1, b2, b3] = cube.diagonal_point(t);
    if (FrictionParams::valid(b1, b2, b3)) {
      out.push_back(FrictionParams{b1, b2, b3});
    }
  }
  return out;
}

std::vector<FrictionParams> sample_hypercube(int n, const FrictionCube& cube,
                                             std::uint64_t seed) {
  std::vector<FrictionParams> out;
  if (n <= 0) return out;
  Rng rng(seed);

  // One stratum permutation per axis.
  std::array<std::vector<int>, 3> strata;
  for (auto& s : strata) {
    s.resize(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), 0);
    rng.shuffle(s);
  }

  const std::array<Interval, 3> axes{cube.b1, cube.b2, cube.b3};
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    constexpr int kMaxTries = 1000;
    for (int attempt = 0;; ++attempt) {
      std::array<double, 3> p{};
      for (int a = 0; a < 3; ++a) {
        const auto& axis = axes[static_cast<std::size_t>(a)];
        const double width = (axis.hi - axis.lo) / n;
        const int stratum = strata[static_cast<std::size_t>(a)]
                                  [static_cast<std::size_t>(i)];
        p[static_cast<std::size_t>(a)] =
            axis.lo + (stratum + rng.uniform()) * width;
      }
      if (FrictionParams::valid(p[0], p[1], p[2])) {
        out.push_back(FrictionParams{p[0], p[1], p[2]});
        break;
      }
      if (attempt >= kMaxTries) {
        throw std::runtime_error(
            "latin hypercube stratum contains no valid friction parameters");
      }
    }
  }
  return out;
}

std::vector<SlipMuPair> discretize_curve(const FrictionParams& params,
                                         int n_points) {
  if (n_points < 2) {
    throw std::invalid_argument("curve discretization needs >= 2 points");
  }
  std::vector<SlipMuPair> curve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double lambda =
        static_cast<double>(i) / static_cast<double>(n_points - 1);
    curve[static_cast<std::size_t>(i)] = SlipMuPair{lambda, mu(params, lambda)};
  }
  return curve;
}

std::vector<LabeledSample> extract_windows(const std::vector<SlipMuPair>& curve,
                                           int window_size, int stride,
                                           double sigma, Rng& rng,
                                           double label) {
  std::vector<LabeledSample> out;
  const int n = static_cast<int>(curve.size());
  if (window_size <= 0 || n < window_size) return out;
  if (stride <= 0) throw std::invalid_argument("stride must be positive");

  std::vector<SlipMuPair> noisy = curve;
  if (sigma > 0.0) {
    for (auto& pair : noisy) pair = add_noise(pair, sigma, rng);
  }

  for (int start = 0; start + window_size <= n; start += stride) {
    LabeledSample sample;
    sample.label = label;
    sample.features.resize(2 * static_cast<std::size_t>(window_size));
    for (int i = 0; i < window_size; ++i) {
      const auto& p = noisy[static_cast<std::size_t>(start + i)];
      sample.features[2 * static_cast<std::size_t>(i)] = p.lambda;
      sample.features[2 * static_cast<std::size_t>(i) + 1] = p.mu;
    }
    out.push_back(std::move(sample));
  }
  return out;
}

namespace {

SampleSet pack_samples(const std::vector<const LabeledSample*>& samples,
                       const std::vector<int>& curve_ids, int width) {
  SampleSet set;
  set.features.resize(static_cast<Eigen::Index>(samples.size()), width);
  set.labels.resize(static_cast<Eigen::Index>(samples.size()));
  set.curve_ids = curve_ids;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& f = samples[i]->features;
    for (int c = 0; c < width; ++c) {
      set.features(static_cast<Eigen::Index>(i), c) =
          f[static_cast<std::size_t>(c)];
    }
    set.labels[static_cast<Eigen::Index>(i)] = samples[i]->label;
  }
  return set;
}

}  // namespace

DatasetSplits build_dataset(const DatasetMeta& meta) {
  const double ratio_sum =
      meta.split_ratios[0] + meta.split_ratios[1] + meta.split_ratios[2];
  if (std::abs(ratio_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split ratios must sum to 1");
  }

  Rng root(meta.seed);

  std::vector<GeneratedCurve> curves;
  {
    int next_id = 0;
    for (const auto& p : sample_diagonal(meta.n_diag, meta.cube)) {
      curves.push_back({next_id++, p, optimal_slip(p).lambda_star});
    }
    for (const auto& p :
         sample_hypercube(meta.n_hyp, meta.cube, root.fork(1).next_u64())) {
      curves.push_back({next_id++, p, optimal_slip(p).lambda_star});
    }
  }
  if (curves.empty()) {
    throw std::invalid_argument("dataset needs at least one curve");
  }

  const int n_curves = static_cast<int>(curves.size());
  int n_train = static_cast<int>(std::round(meta.split_ratios[0] * n_curves));
  int n_val = static_cast<int>(std::round(meta.split_ratios[1] * n_curves));
  n_train = std::min(n_train, n_curves);
  n_val = std::min(n_val, n_curves - n_train);
  const int n_test = n_curves - n_train - n_val;
  if ((meta.split_ratios[0] > 0 && n_train == 0) ||
      (meta.split_ratios[1] > 0 && n_val == 0) ||
      (meta.split_ratios[2] > 0 && n_test == 0)) {
    throw std::invalid_argument(
        "not enough curves for the requested split ratios");
  }

  std::vector<int> order(curves.size());
  std::iota(order.begin(), order.end(), 0);
  {
    Rng shuffler = root.fork(2);
    shuffler.shuffle(order);
  }

  std::array<double, 3> reference_optima{};
  reference_optima[0] =
      optimal_slip(reference_surface(Surface::Dry)).lambda_star;
  reference_optima[1] =
      optimal_slip(reference_surface(Surface::Wet)).lambda_star;
  reference_optima[2] =
      optimal_slip(reference_surface(Surface::Snow)).lambda_star;
  const auto near_reference = [&](double lambda_star) {
    return std::any_of(reference_optima.begin(), reference_optima.end(),
                       [&](double ref) {
                         return std::abs(lambda_star - ref) <
                                kReferenceExclusionTol;
                       });
  };

  DatasetSplits splits;
  splits.meta = meta;

  std::vector<std::string> split_of(curves.size());
  for (int rank = 0; rank < n_curves; ++rank) {
    const auto& curve = curves[static_cast<std::size_t>(order[
        static_cast<std::size_t>(rank)])];
    std::string split = rank < n_train            ? "train"
                        : rank < n_train + n_val  ? "validation"
                                                  : "test";
    // Reference-like optima must never be trained on.
    if (split == "train" && near_reference(curve.lambda_star)) split = "test";
    split_of[static_cast<std::size_t>(curve.id)] = split;
    splits.curves[curve.id] = CurveInfo{curve.params, curve.lambda_star, split};
  }

  const int width = 2 * meta.window_size;
  std::vector<const LabeledSample*> train_rows, val_rows, test_rows;
  std::vector<int> train_ids, val_ids, test_ids;
  std::vector<std::vector<LabeledSample>> per_curve(curves.size());
  for (const auto& curve : curves) {
    Rng noise = root.fork(100 + static_cast<std::uint64_t>(curve.id));
    const auto discretized = discretize_curve(curve.params, meta.curve_points);
    per_curve[static_cast<std::size_t>(curve.id)] =
        extract_windows(discretized, meta.window_size, meta.stride, meta.sigma,
                        noise, curve.lambda_star);
    const auto& split = split_of[static_cast<std::size_t>(curve.id)];
    for (const auto& sample : per_curve[static_cast<std::size_t>(curve.id)]) {
      if (split == "train") {
        train_rows.push_back(&sample);
        train_ids.push_back(curve.id);
      } else if (split == "validation") {
        val_rows.push_back(&sample);
        val_ids.push_back(curve.id);
      } else {
        test_rows.push_back(&sample);
        test_ids.push_back(curve.id);
      }
    }
  }

  splits.train = pack_samples(train_rows, train_ids, width);
  splits.validation = pack_samples(val_rows, val_ids, width);
  splits.test = pack_samples(test_rows, test_ids, width);
  return splits;
}

namespace {

void append_sample_rows(std::ostream& os, const SampleSet& set,
                        const std::string& split, const DatasetSplits& splits) {
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    const int curve_id = set.curve_ids[static_cast<std::size_t>(i)];
    const auto& info = splits.curves.at(curve_id);
    os << curve_id << ',' << split << ',' << format_double(info.params.beta1)
       << ',' << format_double(info.params.beta2) << ','
       << format_double(info.params.beta3) << ','
       << format_double(set.labels[i]);
    for (Eigen::Index c = 0; c < set.features.cols(); ++c) {
      os << ',' << format_double(set.features(i, c));
    }
    os << '\n';
  }
}

nlohmann::json meta_to_json(const DatasetMeta& meta) {
  nlohmann::json j;
  j["cube"] = {{"b1", {meta.cube.b1.lo, meta.cube.b1.hi}},
               {"b2", {meta.cube.b2.lo, meta.cube.b2.hi}},
               {"b3", {meta.cube.b3.lo, meta.cube.b3.hi}}};
  j["n_diag"] = meta.n_diag;
  j["n_hyp"] = meta.n_hyp;
  j["window_size"] = meta.window_size;
  j["stride"] = meta.stride;
  j["curve_points"] = meta.curve_points;
  j["sigma"] = meta.sigma;
  j["split_ratios"] = meta.split_ratios;
  j["seed"] = meta.seed;
  return j;
}

DatasetMeta meta_from_json(const nlohmann::json& j) {
  DatasetMeta meta;
  meta.cube.b1 = {j.at("cube").at("b1")[0], j.at("cube").at("b1")[1]};
  meta.cube.b2 = {j.at("cube").at("b2")[0], j.at("cube").at("b2")[1]};
  meta.cube.b3 = {j.at("cube").at("b3")[0], j.at("cube").at("b3")[1]};
  meta.n_diag = j.at("n_diag");
  meta.n_hyp = j.at("n_hyp");
  meta.window_size = j.at("window_size");
  meta.stride = j.at("stride");
  meta.curve_points = j.at("curve_points");
  meta.sigma = j.at("sigma");
  meta.split_ratios = j.at("split_ratios");
  meta.seed = j.at("seed");
  return meta;
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p += ".meta.json";
  return p;
}

}  // namespace

void save_dataset(const DatasetSplits& splits,
                  const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open dataset file for writing: " +
                             path.string());
  }
  const int width = 2 * splits.meta.window_size;
  os << "curve_id,split,beta1,beta2,beta3,label";
  for (int c = 0; c < width; ++c) os << ",f" << c;
  os << '\n';
  append_sample_rows(os, splits.train, "train", splits);
  append_sample_rows(os, splits.validation, "validation", splits);
  append_sample_rows(os, splits.test, "test", splits);
  if (!os) {
    throw std::runtime_error("failed writing dataset file: " + path.string());
  }

  std::ofstream meta_os(sidecar_path(path));
  if (!meta_os) {
    throw std::runtime_error("cannot open dataset sidecar for writing: " +
                             sidecar_path(path).string());
  }
  meta_os << meta_to_json(splits.meta).dump(2) << '\n';
}

DatasetSplits load_dataset(const std::filesystem::path& path) {
  std::ifstream meta_is(sidecar_path(path));
  if (!meta_is) {
    throw std::runtime_error("cannot open dataset sidecar: " +
                             sidecar_path(path).string());
  }
  DatasetSplits splits;
  try {
    splits.meta = meta_from_json(nlohmann::json::parse(meta_is));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed dataset sidecar " +
                             sidecar_path(path).string() + ": " + e.what());
  }

  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open dataset file: " + path.string());
  }
  const int width = 2 * splits.meta.window_size;
  const int n_fields = 6 + width;

  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error(path.string() + ":1: missing header");
  }

  struct Row {
    int curve_id;
    std::string split;
    LabeledSample sample;
  };
  std::vector<Row> rows;
  std::map<int, CurveInfo> curves;

  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    fields.reserve(static_cast<std::size_t>(n_fields));
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (static_cast<int>(fields.size()) != n_fields) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(n_fields) +
                               " fields, got " +
                               std::to_string(fields.size()));
    }
    try {
      Row row;
      row.curve_id = std::stoi(fields[0]);
      row.split = fields[1];
      const double b1 = std::stod(fields[2]);
      const double b2 = std::stod(fields[3]);
      const double b3 = std::stod(fields[4]);
      row.sample.label = std::stod(fields[5]);
      row.sample.features.resize(static_cast<std::size_t>(width));
      for (int c = 0; c < width; ++c) {
        row.sample.features[static_cast<std::size_t>(c)] =
            std::stod(fields[static_cast<std::size_t>(6 + c)]);
      }
      curves[row.curve_id] =
          CurveInfo{FrictionParams{b1, b2, b3}, row.sample.label, row.split};
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": parse error: " + e.what());
    }
  }

  splits.curves = std::move(curves);
  std::vector<const LabeledSample*> train_rows, val_rows, test_rows;
  std::vector<int> train_ids, val_ids, test_ids;
  for (const auto& row : rows) {
    if (row.split == "train") {
      train_rows.push_back(&row.sample);
      train_ids.push_back(row.curve_id);
    } else if (row.split == "validation") {
      val_rows.push_back(&row.sample);
      val_ids.push_back(row.curve_id);
    } else if (row.split == "test") {
      test_rows.push_back(&row.sample);
      test_ids.push_back(row.curve_id);
    } else {
      throw std::runtime_error(path.string() + ": unknown split '" +
                               row.split + "'");
    }
  }
  splits.train = pack_samples(train_rows, train_ids, width);
  splits.validation = pack_samples(val_rows, val_ids, width);
  splits.test = pack_samples(test_rows, test_ids, width);
  return splits;
}

}  // namespace optslip
