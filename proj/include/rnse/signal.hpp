// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Framing, windowing, forward/inverse STFT and mask application.
//
// Conventions, fixed so that every numeric contract in the tests is
// well defined:
//   * forward DFT is unnormalized, inverse carries the 1/fft_len factor;
//   * frames start at multiples of hop; the tail is zero-padded so the
//     frame count is ceil(samples / hop);
//   * windows are periodic; the synthesis window is the analysis window
//     divided by the hop-periodic sum of its squares, which makes the
//     overlap-add of (analysis * synthesis) identically one away from
//     the signal edges;
//   * istft additionally divides by the per-sample accumulated window
//     envelope so the edge frames reconstruct exactly as well.

#ifndef RNSE_SIGNAL_HPP_
#define RNSE_SIGNAL_HPP_

#include <cstddef>
#include <vector>

#include "rnse/grid.hpp"

namespace rnse {

// Mono sampled signal, nominal amplitude range [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;
};

// Throws ValueError if samples are non-finite or the rate is not positive.
void validate(const Waveform& wave);

enum class Window { kHann, kSqrtHann };

struct StftConfig {
  int frame_len = 0;
  int hop = 0;
  int fft_len = 0;
  Window window = Window::kSqrtHann;

  int bins() const { return fft_len / 2 + 1; }
  void validate() const;

  // 32 ms frames, 50% hop, fft_len == frame_len, sqrt-hann windows.
  static StftConfig for_rate(int sample_rate);

  bool operator==(const StftConfig&) const = default;
};

struct ComplexSpectrogram {
  ComplexGrid values;  // frames x bins, bins = fft_len/2 + 1
  StftConfig config;
  int sample_rate = 0;

  std::size_t frames() const { return values.rows(); }
  std::size_t bins() const { return values.cols(); }
};

struct MagnitudeSpectrogram {
  Grid values;  // frames x bins, nonnegative
  StftConfig config;
  int sample_rate = 0;

  std::size_t frames() const { return values.rows(); }
  std::size_t bins() const { return values.cols(); }
};

// Per-bin multiplicative gain in [0, 1].
struct GainMask {
  Grid values;

  std::size_t frames() const { return values.rows(); }
  std::size_t bins() const { return values.cols(); }
};

// Throws ValueError if any entry falls outside [0, 1] or is non-finite.
void validate(const GainMask& mask);

// Periodic analysis window of the configured type, length frame_len.
std::vector<double> analysis_window(const StftConfig& config);

// Analysis window divided by the hop-periodicized sum of its squares.
// Throws ValueError when that sum vanishes (window/hop not invertible).
std::vector<double> synthesis_window(const StftConfig& config);

// Number of samples an L-frame synthesis produces.
std::size_t synthesis_length(const StftConfig& config, std::size_t frames);

ComplexSpectrogram stft(const Waveform& wave, const StftConfig& config);

Waveform istft(const ComplexSpectrogram& spec);

// Adjoint of the linear map istft with respect to the real inner product
// over one-sided (re, im) coordinates: <istft(A), b> == <A, istft_adjoint(b)>.
ComplexSpectrogram istft_adjoint(const Waveform& grad_wave,
                                 const StftConfig& config);

ComplexSpectrogram apply_mask(const ComplexSpectrogram& noisy,
                              const GainMask& mask);

MagnitudeSpectrogram magnitude(const ComplexSpectrogram& spec);

namespace detail {

// In-place complex DFT. Radix-2 for power-of-two sizes, direct summation
// otherwise. Unnormalized in both directions; callers scale the inverse.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace detail

}  // namespace rnse

#endif  // RNSE_SIGNAL_HPP_
