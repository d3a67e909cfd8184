// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Test-only reference implementations, kept independent of the library
// code paths they are used to check.

#ifndef RNSE_TESTS_TEST_UTIL_HPP_
#define RNSE_TESTS_TEST_UTIL_HPP_

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace testutil {

// Direct O(N^2) DFT, unnormalized forward convention.
inline std::vector<std::complex<double>> naive_dft(
    const std::vector<double>& frame) {
  const std::size_t n = frame.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang =
          -2.0 * std::numbers::pi * static_cast<double>(k * t) / n;
      acc += frame[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<double> random_samples(std::size_t n, unsigned seed,
                                          double amplitude = 0.5) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  std::vector<double> out(n);
  for (double& s : out) s = dist(rng);
  return out;
}

// Multi-tone signal with slow amplitude modulation; starts and ends at
// zero amplitude.
inline std::vector<double> speechish_samples(std::size_t n, int sample_rate) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double env =
        std::sin(std::numbers::pi * static_cast<double>(i) / n);
    out[i] = env * (0.3 * std::sin(2.0 * std::numbers::pi * 220.0 * t) +
                    0.2 * std::sin(2.0 * std::numbers::pi * 440.0 * t + 0.7) +
                    0.1 * std::sin(2.0 * std::numbers::pi * 1330.0 * t + 1.9));
  }
  return out;
}

inline double rel_err(double got, double want) {
  const double scale = std::max({std::fabs(got), std::fabs(want), 1e-300});
  return std::fabs(got - want) / scale;
}

// Relative error with an absolute floor, for gradient comparisons where
// both sides may be legitimately tiny.
inline double grad_rel_err(double analytic, double fd, double abs_floor) {
  const double diff = std::fabs(analytic - fd);
  if (std::fabs(analytic) < abs_floor && std::fabs(fd) < abs_floor) return 0.0;
  return diff / std::max(std::fabs(analytic), std::fabs(fd));
}

// Unique temporary directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("rnse_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil

#endif  // RNSE_TESTS_TEST_UTIL_HPP_
