// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "rnse/corpus.hpp"
#include "rnse/errors.hpp"
#include "rnse/signal.hpp"
#include "rnse/wave_io.hpp"
#include "test_util.hpp"

using namespace rnse;

namespace {

double inactive_fraction(const Waveform& wave) {
  const int frame = wave.sample_rate * 32 / 1000;
  const int hop = frame / 2;
  std::vector<double> energy;
  for (std::size_t start = 0; start + frame <= wave.samples.size();
       start += hop) {
    double e = 0.0;
    for (int i = 0; i < frame; ++i) {
      e += wave.samples[start + i] * wave.samples[start + i];
    }
    energy.push_back(e);
  }
  const double max_e = *std::max_element(energy.begin(), energy.end());
  std::size_t inactive = 0;
  for (double e : energy) {
    if (e <= max_e * 1e-4) ++inactive;
  }
  return static_cast<double>(inactive) / static_cast<double>(energy.size());
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("speech generator is deterministic and bounded") {
  const Waveform a = synth_speech(42, 2.0, 16000);
  const Waveform b = synth_speech(42, 2.0, 16000);
  CHECK(a.samples == b.samples);
  double peak = 0.0;
  for (double s : a.samples) peak = std::max(peak, std::fabs(s));
  CHECK(peak == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(synth_speech(1, 0.5, 16000), ValueError);
}

TEST_CASE("speech has both active and inactive frames") {
  for (std::uint64_t seed : {1ull, 7ull, 19ull, 101ull, 4242ull}) {
    const Waveform w = synth_speech(seed, 2.0, 16000);
    const double inactive = inactive_fraction(w);
    CHECK(inactive >= 0.2);
    CHECK(inactive <= 0.8);
  }
}

TEST_CASE("speech spectrum stays below the partial cutoff") {
  const Waveform w = synth_speech(5, 2.0, 16000);
  std::size_t nfft = 1;
  while (nfft < w.samples.size()) nfft <<= 1;
  std::vector<std::complex<double>> buf(nfft, 0.0);
  for (std::size_t i = 0; i < w.samples.size(); ++i) buf[i] = w.samples[i];
  detail::fft_inplace(buf, false);
  double total = 0.0, high = 0.0;
  for (std::size_t k = 0; k <= nfft / 2; ++k) {
    const double f = static_cast<double>(k) * 16000.0 / nfft;
    const double p = std::norm(buf[k]);
    total += p;
    if (f > 0.47 * 16000.0) high += p;
  }
  CHECK(high < 1e-4 * total);
}

TEST_CASE("white noise moments") {
  const Waveform w = synth_noise(NoiseKind::kWhite, 11, 2.0, 16000);
  double mean = 0.0;
  for (double s : w.samples) mean += s;
  mean /= static_cast<double>(w.samples.size());
  // Mean of n unit-variance samples has sd 1/sqrt(n).
  CHECK(std::fabs(mean) < 3.0 / std::sqrt(double(w.samples.size())));
  double var = 0.0;
  for (double s : w.samples) var += (s - mean) * (s - mean);
  var /= static_cast<double>(w.samples.size());
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("pink noise falls about 3 dB per octave") {
  const Waveform w = synth_noise(NoiseKind::kPink, 12, 2.0, 16000);
  const std::size_t nfft = 16384;
  std::vector<std::complex<double>> buf(nfft);
  for (std::size_t i = 0; i < nfft; ++i) buf[i] = w.samples[i];
  detail::fft_inplace(buf, false);

  const auto band_level = [&](double lo, double hi) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < nfft / 2; ++k) {
      const double f = static_cast<double>(k) * 16000.0 / nfft;
      if (f >= lo && f < hi) {
        acc += std::norm(buf[k]);
        ++count;
      }
    }
    return acc / static_cast<double>(count);
  };

  double f = 125.0;
  for (int octave = 0; octave < 4; ++octave, f *= 2.0) {
    const double drop = 10.0 * std::log10(band_level(f, 2.0 * f) /
                                          band_level(2.0 * f, 4.0 * f));
    CHECK(drop == doctest::Approx(3.01).epsilon(0.34));
  }
}

TEST_CASE("modulated noise has a 4 Hz energy envelope") {
  const Waveform w = synth_noise(NoiseKind::kModulated, 13, 2.0, 16000);
  const int frame = 128;  // 8 ms
  std::vector<double> env;
  for (std::size_t start = 0; start + frame <= w.samples.size();
       start += frame) {
    double e = 0.0;
    for (int i = 0; i < frame; ++i) {
      e += w.samples[start + i] * w.samples[start + i];
    }
    env.push_back(e);
  }
  double mean = 0.0;
  for (double e : env) mean += e;
  mean /= static_cast<double>(env.size());
  for (double& e : env) e -= mean;

  const double env_rate = 16000.0 / frame;
  const auto spectrum = testutil::naive_dft(env);
  double best_f = 0.0, best_p = 0.0;
  for (std::size_t k = 1; k < env.size() / 2; ++k) {
    const double freq = static_cast<double>(k) * env_rate / env.size();
    if (freq < 1.0 || freq > 10.0) continue;
    const double p = std::norm(spectrum[k]);
    if (p > best_p) {
      best_p = p;
      best_f = freq;
    }
  }
  CHECK(best_f == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("babble noise is deterministic") {
  const Waveform a = synth_noise(NoiseKind::kMultitoneBabble, 14, 1.0, 16000);
  const Waveform b = synth_noise(NoiseKind::kMultitoneBabble, 14, 1.0, 16000);
  CHECK(a.samples == b.samples);
}

TEST_CASE("mixing hits the requested SNR exactly") {
  const Waveform speech = synth_speech(21, 2.0, 16000);
  const Waveform noise = synth_noise(NoiseKind::kWhite, 22, 2.0, 16000);

  const MixResult at_zero = mix_at_snr(speech, noise, 0.0);
  CHECK(std::fabs(measure_snr_db(speech, at_zero.scaled_noise)) < 1e-9);

  for (double snr : {-5.0, 5.0, 12.5}) {
    const MixResult mixed = mix_at_snr(speech, noise, snr);
    CHECK(std::fabs(measure_snr_db(speech, mixed.scaled_noise) - snr) < 1e-6);
    // The mix is the exact sample-wise sum of its parts.
    for (std::size_t i = 0; i < speech.samples.size(); i += 997) {
      CHECK(mixed.noisy.samples[i] ==
            speech.samples[i] + mixed.scaled_noise.samples[i]);
    }
  }

  Waveform silence = speech;
  silence.samples.assign(speech.samples.size(), 0.0);
  CHECK_THROWS_AS(mix_at_snr(silence, noise, 0.0), DegenerateSignalError);
  CHECK_THROWS_AS(mix_at_snr(speech, silence, 0.0), DegenerateSignalError);

  Waveform short_noise = noise;
  short_noise.samples.resize(100);
  CHECK_THROWS_AS(mix_at_snr(speech, short_noise, 0.0), ShapeError);
}

TEST_CASE("manifest parse and format round trip") {
  const std::string text = default_desk_manifest();
  const Manifest m = parse_manifest(text);
  CHECK(m.sample_rate == 16000);
  REQUIRE(m.splits.size() == 3);
  CHECK(m.splits[0].name == "train");
  CHECK(m.splits[0].entries.size() == 60);
  CHECK(m.splits[1].entries.size() == 20);
  CHECK(m.splits[2].entries.size() == 20);
  CHECK(format_manifest(m) == text);

  // Held-out noise kinds in the test split.
  std::set<NoiseKind> train_kinds, test_kinds;
  for (const ManifestEntry& e : m.splits[0].entries) {
    train_kinds.insert(e.mix.noise_kind);
  }
  for (const ManifestEntry& e : m.splits[2].entries) {
    test_kinds.insert(e.mix.noise_kind);
  }
  for (NoiseKind k : test_kinds) CHECK(train_kinds.count(k) == 0);

  // Test-split SNR grid.
  std::set<double> test_snrs;
  for (const ManifestEntry& e : m.splits[2].entries) {
    test_snrs.insert(e.mix.snr_db);
  }
  CHECK(test_snrs == std::set<double>{-5.0, 0.0, 5.0, 10.0});
}

TEST_CASE("manifest errors") {
  CHECK_THROWS_AS(parse_manifest("utt a speech_seed 1\n"), ManifestError);
  CHECK_THROWS_AS(
      parse_manifest("[train]\nutt a snr_db 0\nutt a snr_db 0\n"),
      ManifestError);
  CHECK_THROWS_AS(parse_manifest("[train]\nutt a snr_db\n"), ManifestError);
  CHECK_THROWS_AS(parse_manifest("[train]\nutt a bogus 1\n"), ManifestError);
  CHECK_THROWS_AS(parse_manifest("bogus_header 1\n"), ManifestError);
  CHECK_THROWS_AS(parse_manifest("[train]\nutt a noise purple\n"), ValueError);
}

TEST_CASE("dataset build is deterministic and self-consistent") {
  // A small manifest keeps the test quick while covering all noise kinds.
  Manifest manifest = parse_manifest(default_desk_manifest());
  for (ManifestSplit& split : manifest.splits) {
    split.entries.resize(4);
  }

  testutil::TempDir dir_a("corpus_a");
  testutil::TempDir dir_b("corpus_b");
  build_dataset(manifest, dir_a.path());
  build_dataset(manifest, dir_b.path());

  for (const ManifestSplit& split : manifest.splits) {
    for (const ManifestEntry& e : split.entries) {
      for (const char* part : {".clean.wav", ".noise.wav", ".noisy.wav"}) {
        const auto rel =
            std::filesystem::path(split.name) / (e.id + part);
        const std::string bytes_a = read_bytes(dir_a.path() / rel);
        REQUIRE(!bytes_a.empty());
        CHECK(bytes_a == read_bytes(dir_b.path() / rel));
      }

      const auto base = dir_a.path() / split.name / e.id;
      const Waveform clean = read_wav(base.string() + ".clean.wav");
      const Waveform noise = read_wav(base.string() + ".noise.wav");
      const Waveform noisy = read_wav(base.string() + ".noisy.wav");
      REQUIRE(clean.samples.size() == noisy.samples.size());

      // Stored mix identity at PCM resolution, and no clipping.
      for (std::size_t i = 0; i < clean.samples.size(); ++i) {
        const long qc = std::lround(clean.samples[i] * 32767.0);
        const long qn = std::lround(noise.samples[i] * 32767.0);
        const long qx = std::lround(noisy.samples[i] * 32767.0);
        CHECK(qc + qn == qx);
        CHECK(std::fabs(noisy.samples[i]) <= 1.0);
      }
    }
  }

  CHECK(std::filesystem::exists(dir_a.path() / "manifest.txt"));
  const Manifest copy = load_manifest(dir_a.path() / "manifest.txt");
  CHECK(copy.splits.size() == manifest.splits.size());
}
