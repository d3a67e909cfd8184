// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rnse/losses.hpp"

#include <cmath>
#include <limits>

#include "rnse/errors.hpp"
#include "rnse/mathutil.hpp"

namespace rnse {
namespace {

void check_shapes(const Grid& a, const Grid& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string("shape mismatch: ") + what);
  }
}

double bin_count(const Grid& g) { return static_cast<double>(g.size()); }

}  // namespace

void LossParams::validate() const {
  if (gamma < 1.0) throw ValueError("gamma must be >= 1");
  if (alpha <= 0.0) throw ValueError("alpha must be positive");
  if (mu < 0.0) throw ValueError("mu must be nonnegative");
  if (!(beta0 >= 0.0 && beta0 <= 1.0)) {
    throw ValueError("beta0 must lie in [0, 1]");
  }
}

double LossParams::beta0_from_db(double db) {
  if (db == -std::numeric_limits<double>::infinity()) return 0.0;
  return amplitude_from_db(db);
}

LossResult loss_speech_distortion(const MagnitudeSpectrogram& clean_mag,
                                  const GainMask& mask,
                                  const LossParams& params) {
  params.validate();
  check_shapes(clean_mag.values, mask.values, "clean vs mask");
  const double gamma = params.gamma;
  const double alpha = params.alpha;
  const double n = bin_count(mask.values);

  LossResult out;
  out.grad_mask = Grid(mask.frames(), mask.bins());
  double acc = 0.0;
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    const double s = clean_mag.values[i];
    const double m = mask.values[i];
    const double sa = pw(s, alpha);
    const double inner = (1.0 - pw(m, alpha)) * sa;
    acc += pw(inner, gamma);
    const double g =
        -(gamma * alpha) * pw(inner, gamma - 1.0) * sa * pw(m, alpha - 1.0);
    out.grad_mask[i] = g / n;
  }
  out.value = acc / n;
  return out;
}

LossResult loss_residual_noise_controlled(const MagnitudeSpectrogram& noise_mag,
                                          const GainMask& mask,
                                          const LossParams& params) {
  params.validate();
  check_shapes(noise_mag.values, mask.values, "noise vs mask");
  const double ag = params.alpha * params.gamma;
  const double n = bin_count(mask.values);

  LossResult out;
  out.grad_mask = Grid(mask.frames(), mask.bins());
  double acc = 0.0;
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    const double d = noise_mag.values[i];
    const double x = mask.values[i] * d;
    const double u = pw(x, ag) - pw(params.beta0 * d, ag);
    acc += std::fabs(u);
    const double g = sgn(u) * (ag * pw(x, ag - 1.0)) * d;
    out.grad_mask[i] = g / n;
  }
  out.value = acc / n;
  return out;
}

LossResult loss_generalized(const MagnitudeSpectrogram& clean_mag,
                            const MagnitudeSpectrogram& noise_mag,
                            const GainMask& mask, const LossParams& params) {
  params.validate();
  check_shapes(clean_mag.values, noise_mag.values, "clean vs noise");
  LossResult speech = loss_speech_distortion(clean_mag, mask, params);
  if (params.mu == 0.0) return speech;  // exact reduction to the J_s term
  const LossResult residual =
      loss_residual_noise_controlled(noise_mag, mask, params);

  LossResult out;
  out.value = speech.value + params.mu * residual.value;
  out.grad_mask = Grid(mask.frames(), mask.bins());
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    out.grad_mask[i] = speech.grad_mask[i] + params.mu * residual.grad_mask[i];
  }
  return out;
}

LossResult loss_components(const MagnitudeSpectrogram& clean_mag,
                           const MagnitudeSpectrogram& noise_mag,
                           const GainMask& mask, double mu) {
  if (mu < 0.0) throw ValueError("mu must be nonnegative");
  check_shapes(clean_mag.values, noise_mag.values, "clean vs noise");
  check_shapes(clean_mag.values, mask.values, "clean vs mask");
  const double n = bin_count(mask.values);

  Grid grad_s(mask.frames(), mask.bins());
  Grid grad_d(mask.frames(), mask.bins());
  double acc_s = 0.0;
  double acc_d = 0.0;
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    const double s = clean_mag.values[i];
    const double d = noise_mag.values[i];
    const double m = mask.values[i];
    const double dist = (1.0 - m) * s;
    const double res = m * d;
    acc_s += dist * dist;
    acc_d += res * res;
    grad_s[i] = (-2.0 * dist * s) / n;
    grad_d[i] = ((2.0 * res) * d) / n;
  }

  LossResult out;
  out.value = acc_s / n + mu * (acc_d / n);
  out.grad_mask = Grid(mask.frames(), mask.bins());
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    out.grad_mask[i] = grad_s[i] + mu * grad_d[i];
  }
  return out;
}

LossResult loss_mse_magnitude(const MagnitudeSpectrogram& clean_mag,
                              const MagnitudeSpectrogram& noisy_mag,
                              const GainMask& mask) {
  check_shapes(clean_mag.values, noisy_mag.values, "clean vs noisy");
  check_shapes(clean_mag.values, mask.values, "clean vs mask");
  const double n = bin_count(mask.values);

  LossResult out;
  out.grad_mask = Grid(mask.frames(), mask.bins());
  double acc = 0.0;
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    const double s = clean_mag.values[i];
    const double x = noisy_mag.values[i];
    const double r = s - mask.values[i] * x;
    acc += r * r;
    out.grad_mask[i] = (-2.0 * r * x) / n;
  }
  out.value = acc / n;
  return out;
}

namespace {

// Maps a time-domain gradient back to a mask gradient through the
// synthesis adjoint and the element-wise mask application.
Grid chain_to_mask(const std::vector<double>& grad_time,
                   const ComplexSpectrogram& noisy) {
  Waveform g;
  g.sample_rate = noisy.sample_rate > 0 ? noisy.sample_rate : 1;
  g.samples = grad_time;
  const ComplexSpectrogram grad_spec = istft_adjoint(g, noisy.config);
  Grid grad_mask(noisy.frames(), noisy.bins());
  for (std::size_t i = 0; i < grad_mask.size(); ++i) {
    const std::complex<double> gs = grad_spec.values[i];
    const std::complex<double> x = noisy.values[i];
    grad_mask[i] = gs.real() * x.real() + gs.imag() * x.imag();
  }
  return grad_mask;
}

}  // namespace

LossResult loss_time_mse(const Waveform& clean, const ComplexSpectrogram& noisy,
                         const GainMask& mask) {
  const Waveform shat = istft(apply_mask(noisy, mask));
  if (clean.samples.size() != shat.samples.size()) {
    throw ShapeError("clean length does not match synthesis length");
  }
  const double t = static_cast<double>(shat.samples.size());

  double acc = 0.0;
  std::vector<double> grad_time(shat.samples.size());
  for (std::size_t i = 0; i < shat.samples.size(); ++i) {
    const double e = shat.samples[i] - clean.samples[i];
    acc += e * e;
    grad_time[i] = 2.0 * e / t;
  }

  LossResult out;
  out.value = acc / t;
  out.grad_mask = chain_to_mask(grad_time, noisy);
  return out;
}

double si_sdr_db(const std::vector<double>& reference,
                 const std::vector<double>& estimate) {
  if (reference.size() != estimate.size()) {
    throw ShapeError("reference/estimate length mismatch");
  }
  double ss = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    ss += reference[i] * reference[i];
    dot += estimate[i] * reference[i];
  }
  if (ss == 0.0) throw DegenerateSignalError("zero-energy reference");
  const double a = dot / ss;
  const double num = a * a * ss;
  double den = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double e = a * reference[i] - estimate[i];
    den += e * e;
  }
  if (den == 0.0 || num / den > std::pow(10.0, kSiSdrCapDb / 10.0)) {
    return kSiSdrCapDb;
  }
  if (num == 0.0 || num / den < std::pow(10.0, -kSiSdrCapDb / 10.0)) {
    return -kSiSdrCapDb;
  }
  return db_from_power_ratio(num / den);
}

LossResult loss_si_sdr(const Waveform& clean, const ComplexSpectrogram& noisy,
                       const GainMask& mask) {
  const Waveform shat = istft(apply_mask(noisy, mask));
  if (clean.samples.size() != shat.samples.size()) {
    throw ShapeError("clean length does not match synthesis length");
  }
  const double sisdr = si_sdr_db(clean.samples, shat.samples);

  LossResult out;
  out.value = -sisdr;
  out.grad_mask = Grid(mask.frames(), mask.bins());
  if (std::fabs(sisdr) >= kSiSdrCapDb) return out;  // clamped: zero gradient

  double ss = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < clean.samples.size(); ++i) {
    ss += clean.samples[i] * clean.samples[i];
    dot += shat.samples[i] * clean.samples[i];
  }
  const double a = dot / ss;
  double den = 0.0;
  std::vector<double> err(clean.samples.size());
  for (std::size_t i = 0; i < clean.samples.size(); ++i) {
    err[i] = a * clean.samples[i] - shat.samples[i];
    den += err[i] * err[i];
  }
  // d(-10 log10(num/den))/d shat_t = -(10/ln10)(2 s_t/(a ss) + 2 e_t/den),
  // using that the projection residual is orthogonal to the reference.
  const double c = 10.0 / std::log(10.0);
  std::vector<double> grad_time(clean.samples.size());
  for (std::size_t i = 0; i < clean.samples.size(); ++i) {
    grad_time[i] =
        -c * (2.0 * clean.samples[i] / (a * ss) + 2.0 * err[i] / den);
  }
  out.grad_mask = chain_to_mask(grad_time, noisy);
  return out;
}

MseDecomposition decompose_complex_mse(const ComplexSpectrogram& clean_spec,
                                       const ComplexSpectrogram& noise_spec,
                                       const GainMask& mask) {
  if (!clean_spec.values.same_shape(noise_spec.values)) {
    throw ShapeError("clean/noise spectrogram shapes differ");
  }
  if (!clean_spec.values.same_shape(mask.values)) {
    throw ShapeError("mask shape does not match spectrograms");
  }
  MseDecomposition out;
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    const std::complex<double> s = clean_spec.values[i];
    const std::complex<double> d = noise_spec.values[i];
    const double m = mask.values[i];
    const std::complex<double> dist = (1.0 - m) * s;
    const std::complex<double> res = m * d;
    out.distortion_power += std::norm(dist);
    out.residual_power += std::norm(res);
    out.cross_term += -2.0 * (dist * std::conj(res)).real();
  }
  return out;
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "gl") return LossKind::kGeneralized;
  if (name == "cl") return LossKind::kComponents;
  if (name == "mse") return LossKind::kMseMagnitude;
  if (name == "tmse") return LossKind::kTimeMse;
  if (name == "sisdr") return LossKind::kSiSdr;
  throw ValueError("unknown loss: " + name);
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kGeneralized: return "gl";
    case LossKind::kComponents: return "cl";
    case LossKind::kMseMagnitude: return "mse";
    case LossKind::kTimeMse: return "tmse";
    case LossKind::kSiSdr: return "sisdr";
  }
  return "unknown";
}

}  // namespace rnse
