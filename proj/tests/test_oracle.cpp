// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rnse/errors.hpp"
#include "rnse/oracle.hpp"

using namespace rnse;

namespace {

LossParams exponents(double gamma, double alpha) {
  LossParams p;
  p.gamma = gamma;
  p.alpha = alpha;
  return p;
}

}  // namespace

TEST_CASE("expected losses at the boundary gains") {
  const GaussianPrior prior{2.0, 0.5};

  const ExpectedLosses at_one =
      mc_expected_losses(prior, 1.0, exponents(2, 1), 20000, 1);
  CHECK(at_one.speech_distortion.mean == 0.0);

  const ExpectedLosses at_zero =
      mc_expected_losses(prior, 0.0, exponents(2, 1), 200000, 2);
  CHECK(std::fabs(at_zero.speech_distortion.mean - prior.speech_var) <=
        3.0 * at_zero.speech_distortion.std_error);
  CHECK(at_zero.residual_noise.mean == 0.0);
}

TEST_CASE("expected residual noise scales with the squared gain") {
  const GaussianPrior prior{1.0, 1.0};
  const ExpectedLosses e =
      mc_expected_losses(prior, 0.5, exponents(2, 1), 200000, 3);
  CHECK(std::fabs(e.residual_noise.mean - 0.25 * prior.noise_var) <=
        3.0 * e.residual_noise.std_error);
}

TEST_CASE("closed-form expectations at gamma 2 alpha 1") {
  const GaussianPrior prior{1.7, 0.6};
  for (double m : {0.2, 0.5, 0.8}) {
    const ExpectedLosses e =
        mc_expected_losses(prior, m, exponents(2, 1), 300000, 4);
    CHECK(std::fabs(e.speech_distortion.mean -
                    (1.0 - m) * (1.0 - m) * prior.speech_var) <=
          3.0 * e.speech_distortion.std_error);
    CHECK(std::fabs(e.residual_noise.mean - m * m * prior.noise_var) <=
          3.0 * e.residual_noise.std_error);
  }
}

TEST_CASE("estimates are deterministic given the seed") {
  const GaussianPrior prior{1.0, 1.0};
  const ExpectedLosses a =
      mc_expected_losses(prior, 0.3, exponents(2.5, 1.5), 50000, 42);
  const ExpectedLosses b =
      mc_expected_losses(prior, 0.3, exponents(2.5, 1.5), 50000, 42);
  CHECK(a.speech_distortion.mean == b.speech_distortion.mean);
  CHECK(a.speech_distortion.std_error == b.speech_distortion.std_error);
  CHECK(a.residual_noise.mean == b.residual_noise.mean);
}

TEST_CASE("standard error scales as one over sqrt n") {
  const GaussianPrior prior{1.0, 1.0};
  const std::size_t n = 50000;
  const ExpectedLosses small =
      mc_expected_losses(prior, 0.4, exponents(2, 1), n, 5);
  const ExpectedLosses large =
      mc_expected_losses(prior, 0.4, exponents(2, 1), 4 * n, 5);
  const double ratio =
      small.speech_distortion.std_error / large.speech_distortion.std_error;
  CHECK(ratio >= 1.8);
  CHECK(ratio <= 2.2);
}

TEST_CASE("brute-force gain matches the wiener closed form") {
  struct Case {
    double xi, mu, want;
  };
  const Case cases[] = {
      {1.0, 1.0, 0.5},
      {4.0, 1.0, 0.8},
      {0.25, 2.0, 0.25 / 2.25},
  };
  for (const Case& c : cases) {
    const GaussianPrior prior{c.xi, 1.0};
    const double got =
        brute_force_optimal_gain(prior, c.mu, 2.0, 1.0, 1000, 400000, 7);
    CHECK(std::fabs(got - c.want) < 0.01);
  }
}

TEST_CASE("brute-force gain matches the compressed form at gamma 2") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> xi_dist(0.25, 4.0);
  std::uniform_real_distribution<double> mu_dist(0.5, 2.0);
  for (int trial = 0; trial < 4; ++trial) {
    const double xi = xi_dist(rng);
    const double mu = mu_dist(rng);
    const GaussianPrior prior{xi, 1.0};
    const double got =
        brute_force_optimal_gain(prior, mu, 2.0, 2.0, 1000, 400000,
                                 100 + trial);
    const double want =
        std::sqrt(xi * xi / (mu + xi * xi));
    CHECK(std::fabs(got - want) < 0.02);
  }
}

TEST_CASE("brute force validates its inputs") {
  const GaussianPrior prior{1.0, 1.0};
  CHECK_THROWS_AS(brute_force_optimal_gain(prior, -1.0, 2, 1, 1000, 100, 1),
                  ValueError);
  CHECK_THROWS_AS(brute_force_optimal_gain(prior, 1.0, 2, 1, 50, 100, 1),
                  ValueError);
  const GaussianPrior bad{0.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), ValueError);
}

TEST_CASE("decomposition cross term vanishes in expectation") {
  const GaussianPrior prior{1.3, 0.8};
  const DecompositionReport rep = verify_decomposition(prior, 0.6, 400000, 9);
  CHECK(rep.cross_within_3_sigma);
  CHECK(std::fabs(rep.total_mean -
                  (rep.speech_mean + rep.residual_mean + rep.cross_mean)) <
        1e-9 * rep.total_mean);
}

TEST_CASE("decomposition is exact per draw at the boundary gains") {
  const GaussianPrior prior{1.0, 2.0};
  const DecompositionReport at_zero = verify_decomposition(prior, 0.0, 5000, 10);
  CHECK(at_zero.cross_mean == 0.0);
  CHECK(at_zero.residual_mean == 0.0);
  CHECK(at_zero.total_mean == at_zero.speech_mean);

  const DecompositionReport at_one = verify_decomposition(prior, 1.0, 5000, 11);
  CHECK(at_one.cross_mean == 0.0);
  CHECK(at_one.speech_mean == 0.0);
  CHECK(at_one.total_mean == at_one.residual_mean);
}
