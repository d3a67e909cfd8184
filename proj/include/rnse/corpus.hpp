// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Synthetic desk-scale dataset: speech-like signals, noise generators,
// SNR-controlled mixing and manifest-driven dataset builds.
//
// Manifest format (line oriented, '#' starts a comment):
//   sample_rate 16000           header keys before the first section
//   duration_s 2.0
//   leading_pause_s 0.0
//   [train]                     one section per split
//   utt <id> speech_seed <n> noise <kind> noise_seed <n> snr_db <v> \
//       [duration_s <v>] [pause_s <v>]
// Noise kinds: white, pink, modulated, babble.

#ifndef RNSE_CORPUS_HPP_
#define RNSE_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rnse/signal.hpp"

namespace rnse {

enum class NoiseKind { kWhite, kPink, kModulated, kMultitoneBabble };

NoiseKind noise_kind_from_string(const std::string& name);
std::string to_string(NoiseKind kind);

struct MixSpec {
  double snr_db = 0.0;
  NoiseKind noise_kind = NoiseKind::kWhite;
  std::uint64_t seed = 0;         // noise generator seed
  std::uint64_t speech_seed = 0;
  double duration_s = 2.0;
  double leading_pause_s = 0.0;
};

struct ManifestEntry {
  std::string id;
  MixSpec mix;
};

struct ManifestSplit {
  std::string name;
  std::vector<ManifestEntry> entries;
};

struct Manifest {
  int sample_rate = 16000;
  double duration_s = 2.0;
  double leading_pause_s = 0.0;
  std::vector<ManifestSplit> splits;

  const ManifestSplit* find_split(const std::string& name) const;
};

// Harmonic complex with a gliding fundamental in [100, 300] Hz, a
// formant-like spectral envelope, syllabic amplitude modulation and
// silent gaps; peak-normalized to 0.5. Deterministic per seed.
Waveform synth_speech(std::uint64_t seed, double duration_s, int sample_rate);

// white: i.i.d. unit Gaussian. pink: 1/f power shaping. modulated: white
// with 4 Hz amplitude modulation. babble: sum of 8 speech streams.
// All normalized to unit sample variance.
Waveform synth_noise(NoiseKind kind, std::uint64_t seed, double duration_s,
                     int sample_rate);

struct MixResult {
  Waveform noisy;
  Waveform scaled_noise;
};

// Scales the noise so that 10 log10(P_speech / P_noise) == snr_db, with
// speech power measured over speech-active frames only and noise power
// over the whole utterance. Noise must be at least as long as the speech
// and is trimmed to match.
MixResult mix_at_snr(const Waveform& speech, const Waveform& noise,
                     double snr_db);

// Active-speech power measurement used by mix_at_snr (32 ms frames, 50%
// hop, frames within threshold_db of the loudest frame count as active).
double active_speech_power(const Waveform& speech, double threshold_db = 40.0);

// Re-measures the mixing SNR of a (speech, scaled noise) pair.
double measure_snr_db(const Waveform& speech, const Waveform& scaled_noise);

Manifest parse_manifest(const std::string& text);
Manifest load_manifest(const std::filesystem::path& path);
std::string format_manifest(const Manifest& manifest);

// The shipped desk corpus: 60 train / 20 eval utterances over white and
// pink noise, 20 test utterances over held-out modulated and babble noise.
std::string default_desk_manifest();

// Writes <out>/<split>/<id>.{clean,noise,noisy}.wav for every entry plus
// <out>/manifest.txt. The triple is jointly rescaled to fit 16-bit range,
// and the stored noisy file is the exact PCM sum clean + noise.
void build_dataset(const Manifest& manifest,
                   const std::filesystem::path& out_dir);

}  // namespace rnse

#endif  // RNSE_CORPUS_HPP_
