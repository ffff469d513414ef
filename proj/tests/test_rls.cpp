#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "optslip/estimators.hpp"
#include "optslip/rls.hpp"
#include "oracles.hpp"

using namespace optslip;

TEST_CASE("rls initialization") {
  const RlsState state = rls_init(1000.0, 0.995);
  CHECK(state.theta.isZero());
  for (int i = 0; i < 4; ++i) CHECK(state.covariance(i, i) == 1000.0);
  CHECK(state.covariance.eigenvalues().real().minCoeff() > 0.0);
  CHECK_THROWS_AS(rls_init(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rls_init(10.0, 1.5), std::invalid_argument);
}

TEST_CASE("exact recovery of in-span data with forgetting one") {
  const RlsBasis basis;
  const Eigen::Vector4d theta_true(0.8, -0.3, 0.25, -0.2);
  // huge initial covariance makes the prior bias negligible
  RlsState state = rls_init(1e12, 1.0);
  const double lambdas[] = {0.02, 0.1, 0.35, 0.8};
  for (double lambda : lambdas) {
    const double y = theta_true.dot(basis.phi(lambda));
    state = rls_update(state, basis, SlipMuPair{lambda, y});
  }
  CHECK((state.theta - theta_true).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("repeated identical sample contracts the residual") {
  const RlsBasis basis;
  RlsState state = rls_init(100.0, 1.0);
  const SlipMuPair pair{0.2, 1.0};
  double prev_residual = std::abs(pair.mu - state.theta.dot(basis.phi(0.2)));
  for (int k = 0; k < 20; ++k) {
    state = rls_update(state, basis, pair);
    const double residual =
        std::abs(pair.mu - state.theta.dot(basis.phi(0.2)));
    CHECK(residual <= prev_residual + 1e-15);
    prev_residual = residual;
  }
  CHECK(prev_residual < 1e-3);
}

TEST_CASE("covariance trace nonincreasing at forgetting one") {
  const RlsBasis basis;
  RlsState state = rls_init(1000.0, 1.0);
  Rng rng(17);
  double prev_trace = state.covariance.trace();
  for (int k = 0; k < 200; ++k) {
    const double lambda = rng.uniform();
    state = rls_update(state, basis,
                       SlipMuPair{lambda, rng.normal(0.5, 0.1)});
    const double trace = state.covariance.trace();
    CHECK(trace <= prev_trace * (1.0 + 1e-12));
    prev_trace = trace;
  }
}

TEST_CASE("covariance stays symmetric positive definite") {
  const RlsBasis basis;
  RlsState state = rls_init(1000.0, 0.995);
  Rng rng(23);
  for (int k = 0; k < 500; ++k) {
    const double lambda = rng.uniform();
    const double y = mu(reference_surface(Surface::Dry), lambda) +
                     0.005 * rng.normal();
    state = rls_update(state, basis, SlipMuPair{lambda, y});
    CHECK((state.covariance - state.covariance.transpose())
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(state.covariance);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("recursion equals batch weighted least squares") {
  const RlsBasis basis;
  Rng rng(31);
  for (double forgetting : {1.0, 0.97}) {
    RlsState state = rls_init(1000.0, forgetting);
    std::vector<SlipMuPair> data;
    for (int k = 0; k < 20; ++k) {
      const SlipMuPair pair{rng.uniform(), rng.normal(0.4, 0.2)};
      data.push_back(pair);
      state = rls_update(state, basis, pair);
    }
    const Eigen::Vector4d batch = oracles::batch_weighted_least_squares(
        basis, data, forgetting, 1000.0);
    CHECK((state.theta - batch).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("optimal slip of a fitted dry curve") {
  const RlsBasis basis;
  const FrictionParams dry = reference_surface(Surface::Dry);
  // batch least squares on 1000 noiseless points, then grid argmax
  std::vector<SlipMuPair> data;
  for (int i = 0; i < 1000; ++i) {
    const double lambda = i / 999.0;
    data.push_back(SlipMuPair{lambda, mu(dry, lambda)});
  }
  RlsState state = rls_init(1e9, 1.0);
  for (const auto& pair : data) state = rls_update(state, basis, pair);
  const RlsEstimate est = rls_optimal_slip(state, basis);
  CHECK(est.identified);
  CHECK(std::abs(est.lambda_star - 0.1700) < 0.01);
}

TEST_CASE("degenerate fits") {
  const RlsBasis basis;
  SUBCASE("all-zero theta is flagged unidentified") {
    const RlsState state = rls_init(1000.0, 1.0);
    const RlsEstimate est = rls_optimal_slip(state, basis);
    CHECK(!est.identified);
    CHECK(est.lambda_star == 0.01);
  }
  SUBCASE("monotone increasing fit clamps at the upper bound") {
    RlsState state = rls_init(1000.0, 1.0);
    state.theta << 0.0, 0.0, 0.0, 1.0;  // mu = lambda
    const RlsEstimate est = rls_optimal_slip(state, basis);
    CHECK(est.identified);
    CHECK(est.lambda_star == 0.99);
  }
}

TEST_CASE("forgetting tracks a surface switch on synthetic streams") {
  const RlsBasis basis;
  const FrictionParams dry = reference_surface(Surface::Dry);
  const FrictionParams snow = reference_surface(Surface::Snow);

  // projected optimum of the new surface, from a pure batch fit
  std::vector<SlipMuPair> snow_data;
  for (int i = 0; i < 1000; ++i) {
    const double lambda = i / 999.0;
    snow_data.push_back(SlipMuPair{lambda, mu(snow, lambda)});
  }
  RlsState snow_only = rls_init(1e9, 1.0);
  for (const auto& pair : snow_data) {
    snow_only = rls_update(snow_only, basis, pair);
  }
  const double snow_projected =
      rls_optimal_slip(snow_only, basis).lambda_star;

  Rng rng(57);
  RlsState state = rls_init(1000.0, 0.995);
  for (int k = 0; k < 1000; ++k) {
    const double lambda = rng.uniform();
    state = rls_update(state, basis, SlipMuPair{lambda, mu(dry, lambda)});
  }
  for (int k = 0; k < 3000; ++k) {
    const double lambda = rng.uniform();
    state = rls_update(state, basis, SlipMuPair{lambda, mu(snow, lambda)});
  }
  const double tracked = rls_optimal_slip(state, basis).lambda_star;
  CHECK(std::abs(tracked - snow_projected) < 0.02);
}

TEST_CASE("estimator adapter holds until data arrives and stays finite") {
  RlsEstimatorConfig config;
  RlsEstimator estimator(config, 0.10);
  CHECK(estimator.estimate() == 0.10);
  estimator.observe(SlipMuPair{0.05, 0.3});
  const double first = estimator.estimate();
  CHECK(first >= 0.01);
  CHECK(first <= 0.99);
  // pairs inside the novelty gate are ignored
  const RlsState before = estimator.state();
  estimator.observe(SlipMuPair{0.05 + 1e-5, 0.31});
  CHECK(estimator.state().theta == before.theta);
}
