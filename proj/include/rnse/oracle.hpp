// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Independent Monte-Carlo and brute-force checks of the gain derivations:
// expected subband losses under a circular complex Gaussian prior, the
// grid-minimized Lagrangian objective, and the square-error decomposition
// into speech distortion plus residual noise.

#ifndef RNSE_ORACLE_HPP_
#define RNSE_ORACLE_HPP_

#include <cstdint>

#include "rnse/losses.hpp"

namespace rnse {

struct GaussianPrior {
  double speech_var = 1.0;  // E{|S|^2}
  double noise_var = 1.0;   // E{|D|^2}

  double xi() const { return speech_var / noise_var; }
  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

struct ExpectedLosses {
  McEstimate speech_distortion;  // E{((1 - m^a)|S|^a)^g}
  McEstimate residual_noise;     // E{(m^a |D|^a)^g}
};

// Sample means and standard errors of the two generalized subband errors
// at a fixed gain value. mu/beta0 in params are ignored here.
ExpectedLosses mc_expected_losses(const GaussianPrior& prior, double mask_value,
                                  const LossParams& params, std::size_t n,
                                  std::uint64_t seed);

// Minimizes E{J_s} + mu E{J_d} over the gain in [0, 1]: uniform grid with
// common random numbers, then one golden-section refinement pass.
double brute_force_optimal_gain(const GaussianPrior& prior, double mu,
                                double gamma, double alpha,
                                std::size_t grid_size, std::size_t n,
                                std::uint64_t seed);

struct DecompositionReport {
  double total_mean = 0.0;       // E{|S - m(S+D)|^2}
  double speech_mean = 0.0;      // E{|(1-m) S|^2}
  double residual_mean = 0.0;    // E{|m D|^2}
  double cross_mean = 0.0;       // E{total - speech - residual}
  double cross_std_error = 0.0;
  std::size_t n_samples = 0;
  bool cross_within_3_sigma = false;
};

// Monte-Carlo check that the expected complex-spectrum square error splits
// into speech distortion plus residual noise (zero cross term).
DecompositionReport verify_decomposition(const GaussianPrior& prior,
                                         double mask_value, std::size_t n,
                                         std::uint64_t seed);

}  // namespace rnse

#endif  // RNSE_ORACLE_HPP_
