// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rnse/oracle.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "rnse/errors.hpp"
#include "rnse/mathutil.hpp"
#include "rnse/rng.hpp"

namespace rnse {
namespace {

// Circular complex Gaussian with E{|z|^2} = var.
std::complex<double> complex_gaussian(Rng& rng, double var) {
  const double s = std::sqrt(var / 2.0);
  const double re = s * rng.normal();
  const double im = s * rng.normal();
  return {re, im};
}

McEstimate summarize(double sum, double sum_sq, std::size_t n) {
  McEstimate e;
  e.n_samples = n;
  e.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double var =
        (sum_sq - sum * sum / static_cast<double>(n)) /
        static_cast<double>(n - 1);
    e.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
  return e;
}

}  // namespace

void GaussianPrior::validate() const {
  if (speech_var <= 0.0 || noise_var <= 0.0) {
    throw ValueError("prior variances must be positive");
  }
}

ExpectedLosses mc_expected_losses(const GaussianPrior& prior, double mask_value,
                                  const LossParams& params, std::size_t n,
                                  std::uint64_t seed) {
  prior.validate();
  if (!(mask_value >= 0.0 && mask_value <= 1.0)) {
    throw ValueError("gain must lie in [0, 1]");
  }
  if (n < 1) throw ValueError("sample count must be at least 1");

  const double gamma = params.gamma;
  const double alpha = params.alpha;
  const double one_minus_ma = 1.0 - pw(mask_value, alpha);
  const double ma = pw(mask_value, alpha);

  Rng rng(seed);
  double js_sum = 0.0, js_sq = 0.0, jd_sum = 0.0, jd_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double smag = std::abs(complex_gaussian(rng, prior.speech_var));
    const double dmag = std::abs(complex_gaussian(rng, prior.noise_var));
    const double js = pw(one_minus_ma * pw(smag, alpha), gamma);
    const double jd = pw(ma * pw(dmag, alpha), gamma);
    js_sum += js;
    js_sq += js * js;
    jd_sum += jd;
    jd_sq += jd * jd;
  }

  ExpectedLosses out;
  out.speech_distortion = summarize(js_sum, js_sq, n);
  out.residual_noise = summarize(jd_sum, jd_sq, n);
  return out;
}

double brute_force_optimal_gain(const GaussianPrior& prior, double mu,
                                double gamma, double alpha,
                                std::size_t grid_size, std::size_t n,
                                std::uint64_t seed) {
  prior.validate();
  if (mu < 0.0) throw ValueError("mu must be nonnegative");
  if (gamma < 1.0) throw ValueError("gamma must be >= 1");
  if (alpha <= 0.0) throw ValueError("alpha must be positive");
  if (grid_size < 100) throw ValueError("grid size must be at least 100");
  if (n < 1) throw ValueError("sample count must be at least 1");

  // The draws enter the objective only through mean |S|^(alpha*gamma) and
  // mean |D|^(alpha*gamma); computing those once realizes common random
  // numbers across every grid point exactly.
  const double ag = alpha * gamma;
  Rng rng(seed);
  double s_sum = 0.0, d_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s_sum += pw(std::abs(complex_gaussian(rng, prior.speech_var)), ag);
    d_sum += pw(std::abs(complex_gaussian(rng, prior.noise_var)), ag);
  }
  const double mean_s = s_sum / static_cast<double>(n);
  const double mean_d = d_sum / static_cast<double>(n);

  const auto objective = [&](double m) {
    return pw(1.0 - pw(m, alpha), gamma) * mean_s + mu * pw(m, ag) * mean_d;
  };

  double best_m = 0.0;
  double best_v = objective(0.0);
  for (std::size_t i = 1; i < grid_size; ++i) {
    const double m = static_cast<double>(i) / static_cast<double>(grid_size - 1);
    const double v = objective(m);
    if (v < best_v) {
      best_v = v;
      best_m = m;
    }
  }

  // Golden-section pass on the bracketing grid interval.
  const double step = 1.0 / static_cast<double>(grid_size - 1);
  double lo = std::max(0.0, best_m - step);
  double hi = std::min(1.0, best_m + step);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = objective(x2);
    }
  }
  return (lo + hi) / 2.0;
}

DecompositionReport verify_decomposition(const GaussianPrior& prior,
                                         double mask_value, std::size_t n,
                                         std::uint64_t seed) {
  prior.validate();
  if (!(mask_value >= 0.0 && mask_value <= 1.0)) {
    throw ValueError("gain must lie in [0, 1]");
  }
  if (n < 1) throw ValueError("sample count must be at least 1");

  Rng rng(seed);
  double total = 0.0, speech = 0.0, residual = 0.0;
  double cross = 0.0, cross_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> s = complex_gaussian(rng, prior.speech_var);
    const std::complex<double> d = complex_gaussian(rng, prior.noise_var);
    const std::complex<double> dist = (1.0 - mask_value) * s;
    const std::complex<double> res = mask_value * d;
    // Error of the masked estimate, s - m(s+d), in its expanded form so
    // the boundary gains stay exact.
    const double jx = std::norm(dist - res);
    const double js = std::norm(dist);
    const double jd = std::norm(res);
    const double c = jx - js - jd;
    total += jx;
    speech += js;
    residual += jd;
    cross += c;
    cross_sq += c * c;
  }

  DecompositionReport out;
  out.n_samples = n;
  out.total_mean = total / static_cast<double>(n);
  out.speech_mean = speech / static_cast<double>(n);
  out.residual_mean = residual / static_cast<double>(n);
  const McEstimate ce = summarize(cross, cross_sq, n);
  out.cross_mean = ce.mean;
  out.cross_std_error = ce.std_error;
  out.cross_within_3_sigma =
      std::fabs(out.cross_mean) <= 3.0 * out.cross_std_error;
  return out;
}

}  // namespace rnse
