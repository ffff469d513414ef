#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "optslip/friction.hpp"
#include "optslip/rng.hpp"
#include "optslip/sensing.hpp"

namespace optslip {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Box of admissible Burckhardt triples used to synthesize training surfaces.
// The diagonal runs from (b1.lo, b2.hi, b3.lo) to (b1.hi, b2.lo, b3.hi):
// traversing beta2 downward is what places the sampled curves near the
// published reference surfaces, which sit close to that segment.
struct FrictionCube {
  Interval b1{0.15, 1.35};
  Interval b2{20.0, 100.0};
  Interval b3{0.05, 0.55};

  std::array<double, 3> diagonal_point(double t) const;
  bool contains(const FrictionParams& p) const;
};

struct LabeledSample {
  std::vector<double> features;  // flattened window, length 2P
  double label = 0.0;            // ground-truth optimal slip of the curve
};

struct CurveInfo {
  FrictionParams params;
  double lambda_star = 0.0;
  std::string split;  // "train", "validation" or "test"
};

struct SampleSet {
  Eigen::MatrixXd features;  // one row per sample
  Eigen::VectorXd labels;
  std::vector<int> curve_ids;

  Eigen::Index size() const { return features.rows(); }
};

struct DatasetMeta {
  FrictionCube cube;
  int n_diag = 50;
  int n_hyp = 150;
  int window_size = 50;  // P
  int stride = 1;
  int curve_points = 1000;
  double sigma = 0.005;
  std::array<double, 3> split_ratios{0.70, 0.15, 0.15};
  std::uint64_t seed = 0;
};

struct DatasetSplits {
  SampleSet train;
  SampleSet validation;
  SampleSet test;
  std::map<int, CurveInfo> curves;
  DatasetMeta meta;
};

// n points uniformly spaced along the cube diagonal; n == 1 yields the cube
// midpoint. Parameter triples failing the validity predicate are dropped.
std::vector<FrictionParams> sample_diagonal(int n, const FrictionCube& cube);

// Latin hypercube sample of the cube: each axis is cut into n equal strata
// and every stratum holds exactly one point. Invalid triples are resampled
// inside their stratum.
std::vector<FrictionParams> sample_hypercube(int n, const FrictionCube& cube,
                                             std::uint64_t seed);

// Noiseless curve discretization: n_points slips uniform on [0, 1].
std::vector<SlipMuPair> discretize_curve(const FrictionParams& params,
                                         int n_points);

// Sliding windows over a discretized curve. Noise is applied to the mu track
// once, so overlapping windows share draws like overlapping measurements
// would. Returns an empty list when the curve is shorter than P.
std::vector<LabeledSample> extract_windows(const std::vector<SlipMuPair>& curve,
                                           int window_size, int stride,
                                           double sigma, Rng& rng,
                                           double label);

// Full pipeline: sample curves, extract windows, and assign whole curves to
// splits with a seeded shuffle. Curves whose optimal slip lies within 1e-3 of
// a reference surface are kept out of the training split.
DatasetSplits build_dataset(const DatasetMeta& meta);

void save_dataset(const DatasetSplits& splits,
                  const std::filesystem::path& path);
DatasetSplits load_dataset(const std::filesystem::path& path);

}  // namespace optslip
