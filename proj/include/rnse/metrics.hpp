// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Objective evaluation via shadow filtering: the mask is applied
// separately to the oracle noise and clean spectrograms, so attenuation
// of each component is exactly computable.

#ifndef RNSE_METRICS_HPP_
#define RNSE_METRICS_HPP_

#include "rnse/signal.hpp"

namespace rnse {

// Reported dB values are capped here when a denominator vanishes.
constexpr double kMetricCapDb = 100.0;

// NA = 10 log10(sum |D|^2 / sum |M D|^2) over all bins.
double noise_attenuation(const ComplexSpectrogram& noise_spec,
                         const GainMask& mask);

// SA = 10 log10(sum |S|^2 / sum |M S|^2) over speech-active frames
// (frame energy above the maximum frame energy minus the threshold).
double speech_attenuation(const ComplexSpectrogram& clean_spec,
                          const GainMask& mask,
                          double active_threshold_db = 40.0);

// SDR = 10 log10(||s||^2 / ||s - shat||^2), capped at kMetricCapDb.
double sdr(const Waveform& clean, const Waveform& enhanced);

// Scale-invariant SDR in dB; shares its implementation with the SI-SDR
// loss (same clamping at +-60 dB).
double si_sdr_metric(const Waveform& clean, const Waveform& enhanced);

}  // namespace rnse

#endif  // RNSE_METRICS_HPP_
