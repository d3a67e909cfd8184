// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rnse/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "rnse/errors.hpp"
#include "rnse/mathutil.hpp"

namespace rnse {

void GainParams::validate() const {
  if (mu < 0.0) throw ValueError("mu must be nonnegative");
  if (alpha <= 0.0) throw ValueError("alpha must be positive");
  if (gamma <= 1.0) {
    throw ValueError("gamma must exceed 1 for the closed-form gain");
  }
}

SnrField a_priori_snr(const MagnitudeSpectrogram& clean,
                      const MagnitudeSpectrogram& noise, double floor) {
  if (!clean.values.same_shape(noise.values)) {
    throw ShapeError("clean/noise spectrogram shapes differ");
  }
  if (floor < 0.0) throw ValueError("snr floor must be nonnegative");
  SnrField snr;
  snr.values = Grid(clean.frames(), clean.bins());
  const std::size_t n = snr.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double s2 = clean.values[i] * clean.values[i];
    const double d2 = std::max(noise.values[i] * noise.values[i], floor);
    snr.values[i] = s2 / d2;
  }
  return snr;
}

GainMask wiener_gain(const SnrField& snr, double mu) {
  if (mu < 0.0) throw ValueError("mu must be nonnegative");
  GainMask mask;
  mask.values = Grid(snr.frames(), snr.bins());
  const std::size_t n = mask.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = snr.values[i];
    mask.values[i] = mu == 0.0 ? 1.0 : xi / (xi + mu);
  }
  return mask;
}

GainMask parametric_gain(const SnrField& snr, const GainParams& params) {
  params.validate();
  const double c1 = params.c1();
  const double c2 = params.c2();
  // 2*c1*c2 - 1 = 1/(gamma - 1), always positive for gamma > 1.
  const double mu_exp = 2.0 * c1 * c2 - 1.0;
  const double mu_pow = pw(params.mu, mu_exp);

  GainMask mask;
  mask.values = Grid(snr.frames(), snr.bins());
  const std::size_t n = mask.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = snr.values[i];
    double m;
    if (params.mu == 0.0) {
      m = 1.0;
    } else if (xi == 0.0) {
      m = 0.0;
    } else {
      const double xic1 = pw(xi, c1);
      m = pw(xic1 / (mu_pow + xic1), c2);
    }
    mask.values[i] = std::clamp(m, 0.0, 1.0);
  }
  return mask;
}

}  // namespace rnse
