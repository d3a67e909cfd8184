// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// A priori SNR from oracle spectra and the closed-form parametric gain
// family obtained from the constrained Lagrangian trade-off between
// speech distortion and residual noise.

#ifndef RNSE_ESTIMATORS_HPP_
#define RNSE_ESTIMATORS_HPP_

#include "rnse/grid.hpp"
#include "rnse/signal.hpp"

namespace rnse {

struct GainParams {
  double mu = 1.0;     // trade-off weight, >= 0
  double gamma = 2.0;  // error exponent, > 1 for the closed form
  double alpha = 1.0;  // spectral compression exponent, > 0

  double c1() const { return alpha * gamma / (2.0 * gamma - 2.0); }
  double c2() const { return 1.0 / alpha; }
  void validate() const;
};

// Per-bin a priori SNR xi = E{|S|^2}/E{|D|^2}, estimated here with
// instantaneous oracle powers.
struct SnrField {
  Grid values;

  std::size_t frames() const { return values.rows(); }
  std::size_t bins() const { return values.cols(); }
};

// xi(l,k) = |S(l,k)|^2 / max(|D(l,k)|^2, floor).
SnrField a_priori_snr(const MagnitudeSpectrogram& clean,
                      const MagnitudeSpectrogram& noise,
                      double floor = 1e-12);

// M = xi / (xi + mu). At mu == 0 the gain is identically one
// (no-penalty pass-through limit).
GainMask wiener_gain(const SnrField& snr, double mu);

// M = (xi^c1 / (mu^(2 c1 c2 - 1) + xi^c1))^c2, clamped to [0, 1].
// Reduces to wiener_gain for gamma = 2, alpha = 1.
GainMask parametric_gain(const SnrField& snr, const GainParams& params);

}  // namespace rnse

#endif  // RNSE_ESTIMATORS_HPP_
