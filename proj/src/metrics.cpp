// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rnse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rnse/errors.hpp"
#include "rnse/losses.hpp"
#include "rnse/mathutil.hpp"

namespace rnse {

double noise_attenuation(const ComplexSpectrogram& noise_spec,
                         const GainMask& mask) {
  if (!noise_spec.values.same_shape(mask.values)) {
    throw ShapeError("mask shape does not match noise spectrogram");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    const double p = std::norm(noise_spec.values[i]);
    num += p;
    den += mask.values[i] * mask.values[i] * p;
  }
  if (den <= 0.0) return kMetricCapDb;
  return std::min(db_from_power_ratio(num / den), kMetricCapDb);
}

double speech_attenuation(const ComplexSpectrogram& clean_spec,
                          const GainMask& mask, double active_threshold_db) {
  if (!clean_spec.values.same_shape(mask.values)) {
    throw ShapeError("mask shape does not match clean spectrogram");
  }
  const std::size_t frames = clean_spec.frames();
  const std::size_t bins = clean_spec.bins();
  std::vector<double> energy(frames, 0.0);
  double max_energy = 0.0;
  for (std::size_t l = 0; l < frames; ++l) {
    for (std::size_t k = 0; k < bins; ++k) {
      energy[l] += std::norm(clean_spec.values(l, k));
    }
    max_energy = std::max(max_energy, energy[l]);
  }
  const double threshold =
      max_energy * std::pow(10.0, -active_threshold_db / 10.0);
  if (max_energy <= 0.0) throw NoSpeechError("no speech-active frames");

  double num = 0.0, den = 0.0;
  bool any_active = false;
  for (std::size_t l = 0; l < frames; ++l) {
    if (energy[l] <= threshold) continue;
    any_active = true;
    for (std::size_t k = 0; k < bins; ++k) {
      const double p = std::norm(clean_spec.values(l, k));
      num += p;
      den += mask.values(l, k) * mask.values(l, k) * p;
    }
  }
  if (!any_active) throw NoSpeechError("no speech-active frames");
  if (den <= 0.0) return kMetricCapDb;
  return std::min(db_from_power_ratio(num / den), kMetricCapDb);
}

double sdr(const Waveform& clean, const Waveform& enhanced) {
  if (clean.samples.size() != enhanced.samples.size()) {
    throw ShapeError("waveform lengths differ");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < clean.samples.size(); ++i) {
    const double e = clean.samples[i] - enhanced.samples[i];
    num += clean.samples[i] * clean.samples[i];
    den += e * e;
  }
  if (num == 0.0) throw DegenerateSignalError("zero-energy reference");
  if (den == 0.0) return kMetricCapDb;
  return std::min(db_from_power_ratio(num / den), kMetricCapDb);
}

double si_sdr_metric(const Waveform& clean, const Waveform& enhanced) {
  return si_sdr_db(clean.samples, enhanced.samples);
}

}  // namespace rnse
