// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Loss family for mask training. Every loss returns a scalar plus the
// analytic gradient with respect to the gain mask. Sums over bins are
// divided by frames*bins, so the trade-off weight mu keeps its meaning
// across utterance lengths; minimizers are unchanged by the scaling.

#ifndef RNSE_LOSSES_HPP_
#define RNSE_LOSSES_HPP_

#include <string>

#include "rnse/grid.hpp"
#include "rnse/signal.hpp"

namespace rnse {

struct LossParams {
  double gamma = 2.0;  // error exponent, >= 1
  double alpha = 1.0;  // compression exponent, > 0
  double mu = 1.0;     // residual-noise weight, >= 0
  double beta0 = 0.1;  // residual-noise target amplitude factor in [0, 1]

  void validate() const;
  // beta0 = 10^(db/20); -inf maps to 0.
  static double beta0_from_db(double db);
};

struct LossResult {
  double value = 0.0;
  Grid grad_mask;  // d value / d mask(l,k)
};

// Speech-distortion term: mean over bins of ((1 - M^alpha) |S|^alpha)^gamma.
LossResult loss_speech_distortion(const MagnitudeSpectrogram& clean_mag,
                                  const GainMask& mask,
                                  const LossParams& params);

// Residual-noise term with target: mean of
// |(M |D|)^(alpha*gamma) - (beta0 |D|)^(alpha*gamma)|.
// Subgradient 0 at the kink.
LossResult loss_residual_noise_controlled(const MagnitudeSpectrogram& noise_mag,
                                          const GainMask& mask,
                                          const LossParams& params);

// Generalized loss: speech distortion + mu * controlled residual noise.
LossResult loss_generalized(const MagnitudeSpectrogram& clean_mag,
                            const MagnitudeSpectrogram& noise_mag,
                            const GainMask& mask, const LossParams& params);

// Components loss: mean of ((1-M)|S|)^2 + mu * mean of (M|D|)^2.
LossResult loss_components(const MagnitudeSpectrogram& clean_mag,
                           const MagnitudeSpectrogram& noise_mag,
                           const GainMask& mask, double mu);

// Magnitude MSE: mean of (|S| - M |X|)^2.
LossResult loss_mse_magnitude(const MagnitudeSpectrogram& clean_mag,
                              const MagnitudeSpectrogram& noisy_mag,
                              const GainMask& mask);

// Time-domain MSE between clean and istft(mask * noisy). clean must have
// exactly the synthesis length of the masked spectrogram. The gradient is
// chained through the linear synthesis via istft_adjoint.
LossResult loss_time_mse(const Waveform& clean, const ComplexSpectrogram& noisy,
                         const GainMask& mask);

// Negated SI-SDR of istft(mask * noisy) against clean, clamped to
// [-kSiSdrCapDb, kSiSdrCapDb]; gradient is zero in the clamped region.
LossResult loss_si_sdr(const Waveform& clean, const ComplexSpectrogram& noisy,
                       const GainMask& mask);

constexpr double kSiSdrCapDb = 60.0;

// Shared SI-SDR core, in dB, clamped to +-kSiSdrCapDb. Throws
// DegenerateSignalError when the reference has zero energy.
double si_sdr_db(const std::vector<double>& reference,
                 const std::vector<double>& estimate);

// Deterministic expansion of the complex-spectrum square error:
// distortion_power + residual_power + cross_term == sum |S - M X|^2 exactly,
// with X = S + D. Raw sums, not means.
struct MseDecomposition {
  double distortion_power = 0.0;  // sum |(1-M) S|^2
  double residual_power = 0.0;    // sum |M D|^2
  double cross_term = 0.0;        // -2 sum Re{(1-M) S conj(M D)}
};

MseDecomposition decompose_complex_mse(const ComplexSpectrogram& clean_spec,
                                       const ComplexSpectrogram& noise_spec,
                                       const GainMask& mask);

enum class LossKind { kGeneralized, kComponents, kMseMagnitude, kTimeMse, kSiSdr };

LossKind loss_kind_from_string(const std::string& name);
std::string to_string(LossKind kind);

}  // namespace rnse

#endif  // RNSE_LOSSES_HPP_
