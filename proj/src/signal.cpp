// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rnse/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rnse/errors.hpp"

namespace rnse {
namespace {

constexpr double kEnvelopeFloor = 1e-8;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t frame_count(std::size_t samples, int hop) {
  return (samples + static_cast<std::size_t>(hop) - 1) /
         static_cast<std::size_t>(hop);
}

// Per-sample overlap-add of analysis*synthesis over L frames. Identically
// one in the interior; smaller near the edges where fewer frames overlap.
std::vector<double> envelope(const std::vector<double>& wa,
                             const std::vector<double>& ws,
                             const StftConfig& config, std::size_t frames) {
  std::vector<double> env(synthesis_length(config, frames), 0.0);
  for (std::size_t l = 0; l < frames; ++l) {
    const std::size_t start = l * static_cast<std::size_t>(config.hop);
    for (int j = 0; j < config.frame_len; ++j) {
      env[start + j] += wa[j] * ws[j];
    }
  }
  return env;
}

}  // namespace

void validate(const Waveform& wave) {
  if (wave.sample_rate <= 0) {
    throw ValueError("waveform sample rate must be positive");
  }
  for (double s : wave.samples) {
    if (!std::isfinite(s)) throw ValueError("waveform sample not finite");
  }
}

void StftConfig::validate() const {
  if (hop <= 0 || frame_len <= 0 || fft_len <= 0) {
    throw ValueError("stft config fields must be positive");
  }
  if (hop > frame_len) throw ValueError("hop must not exceed frame length");
  if (frame_len > fft_len) {
    throw ValueError("frame length must not exceed fft length");
  }
}

StftConfig StftConfig::for_rate(int sample_rate) {
  if (sample_rate <= 0) throw ValueError("sample rate must be positive");
  StftConfig config;
  config.frame_len = sample_rate * 32 / 1000;
  config.hop = config.frame_len / 2;
  config.fft_len = config.frame_len;
  config.window = Window::kSqrtHann;
  config.validate();
  return config;
}

void validate(const GainMask& mask) {
  for (double v : mask.values.raw()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValueError("gain mask value outside [0, 1]");
    }
  }
}

std::vector<double> analysis_window(const StftConfig& config) {
  const int n = config.frame_len;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    const double hann =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
    w[i] = config.window == Window::kHann ? hann : std::sqrt(hann);
  }
  return w;
}

std::vector<double> synthesis_window(const StftConfig& config) {
  const std::vector<double> wa = analysis_window(config);
  // Sum of squared analysis window over all hop shifts; depends only on
  // the sample index modulo hop.
  std::vector<double> period(config.hop, 0.0);
  for (int i = 0; i < config.frame_len; ++i) {
    period[i % config.hop] += wa[i] * wa[i];
  }
  for (double p : period) {
    if (p <= 1e-12) {
      throw ValueError("window/hop pair is not invertible");
    }
  }
  std::vector<double> ws(config.frame_len);
  for (int i = 0; i < config.frame_len; ++i) {
    ws[i] = wa[i] / period[i % config.hop];
  }
  return ws;
}

std::size_t synthesis_length(const StftConfig& config, std::size_t frames) {
  if (frames == 0) return 0;
  return (frames - 1) * static_cast<std::size_t>(config.hop) +
         static_cast<std::size_t>(config.frame_len);
}

namespace detail {

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  const double sign = inverse ? 1.0 : -1.0;
  if (!is_pow2(n)) {
    // Direct O(n^2) transform for odd sizes; desk-scale inputs only.
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double ang = sign * 2.0 * std::numbers::pi *
                           static_cast<double>(k * t % n) / n;
        acc += a[t] * std::complex<double>(std::cos(ang), std::sin(ang));
      }
      out[k] = acc;
    }
    a = std::move(out);
    return;
  }
  // Iterative radix-2 with bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wstep(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w = 1.0;
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wstep;
      }
    }
  }
}

}  // namespace detail

ComplexSpectrogram stft(const Waveform& wave, const StftConfig& config) {
  config.validate();
  validate(wave);
  const std::size_t n = wave.samples.size();
  if (n < static_cast<std::size_t>(config.frame_len)) {
    throw EmptySignalError("waveform shorter than one analysis frame");
  }
  const std::size_t frames = frame_count(n, config.hop);
  const std::size_t bins = static_cast<std::size_t>(config.bins());
  const std::vector<double> wa = analysis_window(config);

  ComplexSpectrogram spec;
  spec.config = config;
  spec.sample_rate = wave.sample_rate;
  spec.values = ComplexGrid(frames, bins);

  std::vector<std::complex<double>> buf(config.fft_len);
  for (std::size_t l = 0; l < frames; ++l) {
    const std::size_t start = l * static_cast<std::size_t>(config.hop);
    for (int j = 0; j < config.fft_len; ++j) {
      const std::size_t t = start + j;
      const double s =
          (j < config.frame_len && t < n) ? wave.samples[t] * wa[j] : 0.0;
      buf[j] = s;
    }
    detail::fft_inplace(buf, /*inverse=*/false);
    for (std::size_t k = 0; k < bins; ++k) {
      spec.values(l, k) = buf[k];
    }
  }
  return spec;
}

Waveform istft(const ComplexSpectrogram& spec) {
  spec.config.validate();
  const StftConfig& config = spec.config;
  const std::size_t frames = spec.frames();
  const std::size_t bins = spec.bins();
  if (bins != static_cast<std::size_t>(config.bins())) {
    throw ShapeError("spectrogram bin count inconsistent with config");
  }
  const std::vector<double> wa = analysis_window(config);
  const std::vector<double> ws = synthesis_window(config);
  const std::size_t out_len = synthesis_length(config, frames);

  std::vector<double> accum(out_len, 0.0);
  std::vector<std::complex<double>> buf(config.fft_len);
  const std::size_t nfft = static_cast<std::size_t>(config.fft_len);
  const bool even = nfft % 2 == 0;

  for (std::size_t l = 0; l < frames; ++l) {
    // Hermitian extension; imaginary parts at DC (and Nyquist for even
    // sizes) do not participate in the real synthesis.
    buf[0] = spec.values(l, 0).real();
    for (std::size_t k = 1; k < bins; ++k) {
      std::complex<double> v = spec.values(l, k);
      if (even && k == bins - 1) v = v.real();
      buf[k] = v;
      if (nfft - k != k) buf[nfft - k] = std::conj(v);
    }
    detail::fft_inplace(buf, /*inverse=*/true);
    const std::size_t start = l * static_cast<std::size_t>(config.hop);
    for (int j = 0; j < config.frame_len; ++j) {
      accum[start + j] += ws[j] * (buf[j].real() / config.fft_len);
    }
  }

  const std::vector<double> env = envelope(wa, ws, config, frames);
  Waveform out;
  out.sample_rate = spec.sample_rate > 0 ? spec.sample_rate : 1;
  out.samples.resize(out_len);
  for (std::size_t t = 0; t < out_len; ++t) {
    out.samples[t] = env[t] > kEnvelopeFloor ? accum[t] / env[t] : accum[t];
  }
  return out;
}

ComplexSpectrogram istft_adjoint(const Waveform& grad_wave,
                                 const StftConfig& config) {
  config.validate();
  const std::size_t len = grad_wave.samples.size();
  if (len < static_cast<std::size_t>(config.frame_len) ||
      (len - config.frame_len) % config.hop != 0) {
    throw ShapeError("gradient length is not an L-frame synthesis length");
  }
  const std::size_t frames = (len - config.frame_len) / config.hop + 1;
  const std::size_t bins = static_cast<std::size_t>(config.bins());
  const std::vector<double> wa = analysis_window(config);
  const std::vector<double> ws = synthesis_window(config);
  const std::vector<double> env = envelope(wa, ws, config, frames);

  // Adjoint of the per-sample envelope division.
  std::vector<double> g(len);
  for (std::size_t t = 0; t < len; ++t) {
    g[t] = env[t] > kEnvelopeFloor ? grad_wave.samples[t] / env[t]
                                   : grad_wave.samples[t];
  }

  ComplexSpectrogram out;
  out.config = config;
  out.sample_rate = grad_wave.sample_rate;
  out.values = ComplexGrid(frames, bins);

  const std::size_t nfft = static_cast<std::size_t>(config.fft_len);
  const bool even = nfft % 2 == 0;
  std::vector<std::complex<double>> buf(config.fft_len);
  for (std::size_t l = 0; l < frames; ++l) {
    const std::size_t start = l * static_cast<std::size_t>(config.hop);
    for (int j = 0; j < config.fft_len; ++j) {
      buf[j] = j < config.frame_len ? ws[j] * g[start + j] : 0.0;
    }
    detail::fft_inplace(buf, /*inverse=*/false);
    for (std::size_t k = 0; k < bins; ++k) {
      // Interior bins appear twice in the Hermitian extension.
      const bool single = k == 0 || (even && k == bins - 1);
      const double weight = (single ? 1.0 : 2.0) / config.fft_len;
      out.values(l, k) = weight * buf[k];
    }
  }
  return out;
}

ComplexSpectrogram apply_mask(const ComplexSpectrogram& noisy,
                              const GainMask& mask) {
  if (!noisy.values.same_shape(mask.values)) {
    throw ShapeError("mask shape does not match spectrogram");
  }
  ComplexSpectrogram out = noisy;
  const std::size_t n = out.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = mask.values[i] * noisy.values[i];
  }
  return out;
}

MagnitudeSpectrogram magnitude(const ComplexSpectrogram& spec) {
  MagnitudeSpectrogram out;
  out.config = spec.config;
  out.sample_rate = spec.sample_rate;
  out.values = Grid(spec.frames(), spec.bins());
  const std::size_t n = out.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = std::abs(spec.values[i]);
  }
  return out;
}

}  // namespace rnse
