// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rnse/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "rnse/errors.hpp"
#include "rnse/mathutil.hpp"
#include "rnse/rng.hpp"
#include "rnse/wave_io.hpp"

namespace rnse {
namespace {

constexpr double kPeakTarget = 0.5;

std::size_t sample_count(double duration_s, int sample_rate) {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

void normalize_peak(std::vector<double>& samples, double peak) {
  double maxabs = 0.0;
  for (double s : samples) maxabs = std::max(maxabs, std::fabs(s));
  if (maxabs == 0.0) return;
  const double g = peak / maxabs;
  for (double& s : samples) s *= g;
}

void normalize_variance(std::vector<double>& samples) {
  double sum = 0.0, sum_sq = 0.0;
  for (double s : samples) {
    sum += s;
    sum_sq += s * s;
  }
  const double n = static_cast<double>(samples.size());
  const double var = sum_sq / n - (sum / n) * (sum / n);
  if (var <= 0.0) return;
  const double g = 1.0 / std::sqrt(var);
  for (double& s : samples) s *= g;
}

Waveform white_noise(std::uint64_t seed, std::size_t n, int sample_rate) {
  Rng rng(seed);
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(n);
  for (double& s : w.samples) s = rng.normal();
  return w;
}

Waveform pink_noise(std::uint64_t seed, std::size_t n, int sample_rate) {
  // Spectral shaping of white noise: flat below f_ref, amplitude 1/sqrt(f)
  // above, so power falls 3 dB per octave.
  std::size_t nfft = 1;
  while (nfft < n) nfft <<= 1;
  Rng rng(seed);
  std::vector<std::complex<double>> buf(nfft);
  for (auto& b : buf) b = rng.normal();
  detail::fft_inplace(buf, /*inverse=*/false);
  const double f_ref = 50.0;
  for (std::size_t k = 0; k < nfft; ++k) {
    const std::size_t sym = k <= nfft / 2 ? k : nfft - k;
    const double f = static_cast<double>(sym) * sample_rate /
                     static_cast<double>(nfft);
    buf[k] *= 1.0 / std::sqrt(std::max(f, f_ref) / f_ref);
  }
  detail::fft_inplace(buf, /*inverse=*/true);
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = buf[i].real() / static_cast<double>(nfft);
  }
  return w;
}

Waveform modulated_noise(std::uint64_t seed, std::size_t n, int sample_rate) {
  Waveform w = white_noise(seed, n, sample_rate);
  const double f_mod = 4.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    w.samples[i] *= 1.0 + 0.8 * std::sin(2.0 * std::numbers::pi * f_mod * t);
  }
  return w;
}

Waveform babble_noise(std::uint64_t seed, double duration_s, int sample_rate) {
  const std::size_t n = sample_count(duration_s, sample_rate);
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(n, 0.0);
  for (int v = 0; v < 8; ++v) {
    const Waveform talker =
        synth_speech(seed * 8191 + static_cast<std::uint64_t>(v) + 1,
                     duration_s, sample_rate);
    for (std::size_t i = 0; i < n; ++i) w.samples[i] += talker.samples[i];
  }
  return w;
}

}  // namespace

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "white") return NoiseKind::kWhite;
  if (name == "pink") return NoiseKind::kPink;
  if (name == "modulated") return NoiseKind::kModulated;
  if (name == "babble") return NoiseKind::kMultitoneBabble;
  throw ValueError("unknown noise kind: " + name);
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kPink: return "pink";
    case NoiseKind::kModulated: return "modulated";
    case NoiseKind::kMultitoneBabble: return "babble";
  }
  return "unknown";
}

Waveform synth_speech(std::uint64_t seed, double duration_s, int sample_rate) {
  if (duration_s < 1.0) throw ValueError("speech duration must be >= 1 s");
  if (sample_rate <= 0) throw ValueError("sample rate must be positive");
  const std::size_t total = sample_count(duration_s, sample_rate);
  Rng rng(seed);

  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(total, 0.0);

  const double fade_s = 0.02;
  const std::size_t fade_n = sample_count(fade_s, sample_rate);
  std::size_t pos = 0;
  bool voiced = true;
  while (pos < total) {
    if (!voiced) {
      pos += sample_count(rng.uniform(0.20, 0.35), sample_rate);
      voiced = true;
      continue;
    }
    const std::size_t seg_n = std::min(
        sample_count(rng.uniform(0.35, 0.60), sample_rate), total - pos);
    const double f0_a = rng.uniform(100.0, 300.0);
    const double f0_b = rng.uniform(100.0, 300.0);
    const double f_am = rng.uniform(2.0, 6.0);
    const double am_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

    // Formant-like envelope sampled at the mean fundamental.
    const double f0_max = std::max(f0_a, f0_b);
    const int harmonics = std::max(
        1, static_cast<int>(std::floor(0.45 * sample_rate / f0_max)));
    double centers[3], widths[3];
    for (int f = 0; f < 3; ++f) {
      centers[f] = rng.uniform(300.0, 3200.0);
      widths[f] = rng.uniform(150.0, 500.0);
    }
    const double f0_mean = 0.5 * (f0_a + f0_b);
    std::vector<double> amp(harmonics);
    for (int h = 0; h < harmonics; ++h) {
      const double f = (h + 1) * f0_mean;
      double env = 0.1 / (1.0 + f / 1500.0);
      for (int c = 0; c < 3; ++c) {
        const double z = (f - centers[c]) / widths[c];
        env += std::exp(-0.5 * z * z);
      }
      amp[h] = env / (h + 1);
    }

    std::vector<double> phase(harmonics);
    for (int h = 0; h < harmonics; ++h) {
      phase[h] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }

    for (std::size_t i = 0; i < seg_n; ++i) {
      const double frac = static_cast<double>(i) / seg_n;
      const double f0 = f0_a + (f0_b - f0_a) * frac;
      double s = 0.0;
      for (int h = 0; h < harmonics; ++h) {
        phase[h] += 2.0 * std::numbers::pi * (h + 1) * f0 / sample_rate;
        s += amp[h] * std::sin(phase[h]);
      }
      const double t = static_cast<double>(i) / sample_rate;
      double gain =
          1.0 + 0.35 * std::sin(2.0 * std::numbers::pi * f_am * t + am_phase);
      if (i < fade_n) gain *= static_cast<double>(i) / fade_n;
      if (seg_n - i <= fade_n) gain *= static_cast<double>(seg_n - i) / fade_n;
      w.samples[pos + i] = s * gain;
    }
    pos += seg_n;
    voiced = false;
  }

  normalize_peak(w.samples, kPeakTarget);
  return w;
}

Waveform synth_noise(NoiseKind kind, std::uint64_t seed, double duration_s,
                     int sample_rate) {
  if (duration_s <= 0.0) throw ValueError("noise duration must be positive");
  if (sample_rate <= 0) throw ValueError("sample rate must be positive");
  const std::size_t n = sample_count(duration_s, sample_rate);
  Waveform w;
  switch (kind) {
    case NoiseKind::kWhite:
      w = white_noise(seed, n, sample_rate);
      break;
    case NoiseKind::kPink:
      w = pink_noise(seed, n, sample_rate);
      break;
    case NoiseKind::kModulated:
      w = modulated_noise(seed, n, sample_rate);
      break;
    case NoiseKind::kMultitoneBabble:
      w = babble_noise(seed, duration_s, sample_rate);
      break;
  }
  normalize_variance(w.samples);
  return w;
}

double active_speech_power(const Waveform& speech, double threshold_db) {
  const std::size_t n = speech.samples.size();
  const std::size_t frame = std::max<std::size_t>(
      1, sample_count(0.032, speech.sample_rate));
  const std::size_t hop = std::max<std::size_t>(1, frame / 2);

  std::vector<double> energy;
  for (std::size_t start = 0; start + frame <= n; start += hop) {
    double e = 0.0;
    for (std::size_t i = start; i < start + frame; ++i) {
      e += speech.samples[i] * speech.samples[i];
    }
    energy.push_back(e);
  }
  if (energy.empty()) {
    double e = 0.0;
    for (double s : speech.samples) e += s * s;
    return e / std::max<std::size_t>(1, n);
  }
  const double max_e = *std::max_element(energy.begin(), energy.end());
  const double threshold = max_e * std::pow(10.0, -threshold_db / 10.0);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t f = 0; f < energy.size(); ++f) {
    if (energy[f] > threshold) {
      sum += energy[f];
      count += frame;
    }
  }
  if (count == 0) return 0.0;
  return sum / static_cast<double>(count);
}

double measure_snr_db(const Waveform& speech, const Waveform& scaled_noise) {
  const double ps = active_speech_power(speech);
  double pd = 0.0;
  for (double s : scaled_noise.samples) pd += s * s;
  pd /= std::max<std::size_t>(1, scaled_noise.samples.size());
  if (ps <= 0.0 || pd <= 0.0) {
    throw DegenerateSignalError("zero-energy speech or noise");
  }
  return db_from_power_ratio(ps / pd);
}

MixResult mix_at_snr(const Waveform& speech, const Waveform& noise,
                     double snr_db) {
  if (speech.sample_rate != noise.sample_rate) {
    throw ValueError("sample rates differ");
  }
  if (noise.samples.size() < speech.samples.size()) {
    throw ShapeError("noise shorter than speech");
  }
  const std::size_t n = speech.samples.size();

  const double ps = active_speech_power(speech);
  double pd = 0.0;
  for (std::size_t i = 0; i < n; ++i) pd += noise.samples[i] * noise.samples[i];
  pd /= static_cast<double>(n);
  if (ps <= 0.0) throw DegenerateSignalError("zero-energy speech");
  if (pd <= 0.0) throw DegenerateSignalError("zero-energy noise");

  const double target = ps / std::pow(10.0, snr_db / 10.0);
  const double scale = std::sqrt(target / pd);

  MixResult out;
  out.scaled_noise.sample_rate = speech.sample_rate;
  out.scaled_noise.samples.resize(n);
  out.noisy.sample_rate = speech.sample_rate;
  out.noisy.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.scaled_noise.samples[i] = scale * noise.samples[i];
    out.noisy.samples[i] = speech.samples[i] + out.scaled_noise.samples[i];
  }
  return out;
}

const ManifestSplit* Manifest::find_split(const std::string& name) const {
  for (const ManifestSplit& s : splits) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    tokens.push_back(tok);
  }
  return tokens;
}

double parse_number(const std::string& tok, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ManifestError("bad number '" + tok + "' in " + context);
  }
}

std::uint64_t parse_seed(const std::string& tok, const std::string& context) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ManifestError("bad seed '" + tok + "' in " + context);
  }
}

}  // namespace

Manifest parse_manifest(const std::string& text) {
  Manifest manifest;
  manifest.splits.clear();
  ManifestSplit* current = nullptr;
  std::set<std::string> seen_ids;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string context = "line " + std::to_string(line_no);

    if (tokens[0].front() == '[' && tokens[0].back() == ']') {
      ManifestSplit split;
      split.name = tokens[0].substr(1, tokens[0].size() - 2);
      if (split.name.empty()) throw ManifestError("empty split name, " + context);
      manifest.splits.push_back(split);
      current = &manifest.splits.back();
      continue;
    }

    if (tokens[0] == "utt") {
      if (current == nullptr) {
        throw ManifestError("utterance before any split section, " + context);
      }
      if (tokens.size() < 2) throw ManifestError("missing id, " + context);
      ManifestEntry entry;
      entry.id = tokens[1];
      if (!seen_ids.insert(current->name + "/" + entry.id).second) {
        throw ManifestError("duplicate id '" + entry.id + "', " + context);
      }
      entry.mix.duration_s = manifest.duration_s;
      entry.mix.leading_pause_s = manifest.leading_pause_s;
      if ((tokens.size() - 2) % 2 != 0) {
        throw ManifestError("dangling key, " + context);
      }
      for (std::size_t i = 2; i + 1 < tokens.size(); i += 2) {
        const std::string& key = tokens[i];
        const std::string& value = tokens[i + 1];
        if (key == "speech_seed") {
          entry.mix.speech_seed = parse_seed(value, context);
        } else if (key == "noise_seed") {
          entry.mix.seed = parse_seed(value, context);
        } else if (key == "noise") {
          entry.mix.noise_kind = noise_kind_from_string(value);
        } else if (key == "snr_db") {
          entry.mix.snr_db = parse_number(value, context);
        } else if (key == "duration_s") {
          entry.mix.duration_s = parse_number(value, context);
        } else if (key == "pause_s") {
          entry.mix.leading_pause_s = parse_number(value, context);
        } else {
          throw ManifestError("unknown key '" + key + "', " + context);
        }
      }
      current->entries.push_back(entry);
      continue;
    }

    // Header key/value pairs.
    if (tokens.size() != 2) throw ManifestError("bad header line, " + context);
    if (tokens[0] == "sample_rate") {
      manifest.sample_rate =
          static_cast<int>(parse_number(tokens[1], context));
    } else if (tokens[0] == "duration_s") {
      manifest.duration_s = parse_number(tokens[1], context);
    } else if (tokens[0] == "leading_pause_s") {
      manifest.leading_pause_s = parse_number(tokens[1], context);
    } else {
      throw ManifestError("unknown header key '" + tokens[0] + "', " + context);
    }
  }
  if (manifest.sample_rate <= 0) throw ManifestError("bad sample rate");
  return manifest;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_manifest(text);
}

std::string format_manifest(const Manifest& manifest) {
  std::ostringstream out;
  out << "sample_rate " << manifest.sample_rate << "\n";
  out << "duration_s " << manifest.duration_s << "\n";
  out << "leading_pause_s " << manifest.leading_pause_s << "\n";
  for (const ManifestSplit& split : manifest.splits) {
    out << "\n[" << split.name << "]\n";
    for (const ManifestEntry& e : split.entries) {
      out << "utt " << e.id << " speech_seed " << e.mix.speech_seed
          << " noise " << to_string(e.mix.noise_kind) << " noise_seed "
          << e.mix.seed << " snr_db " << e.mix.snr_db;
      if (e.mix.duration_s != manifest.duration_s) {
        out << " duration_s " << e.mix.duration_s;
      }
      if (e.mix.leading_pause_s != manifest.leading_pause_s) {
        out << " pause_s " << e.mix.leading_pause_s;
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string default_desk_manifest() {
  Manifest manifest;
  manifest.sample_rate = 16000;
  manifest.duration_s = 2.0;
  manifest.leading_pause_s = 0.0;

  const auto make_entry = [&](const std::string& prefix, int i,
                              double snr_db, NoiseKind kind,
                              std::uint64_t speech_seed,
                              std::uint64_t noise_seed) {
    ManifestEntry e;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s_%03d", prefix.c_str(), i);
    e.id = buf;
    e.mix.snr_db = snr_db;
    e.mix.noise_kind = kind;
    e.mix.speech_seed = speech_seed;
    e.mix.seed = noise_seed;
    e.mix.duration_s = manifest.duration_s;
    e.mix.leading_pause_s = 0.0;
    return e;
  };

  const double train_snrs[] = {-5.0, 0.0, 5.0, 10.0, 15.0};
  ManifestSplit train{"train", {}};
  for (int i = 0; i < 60; ++i) {
    const NoiseKind kind = i % 2 == 0 ? NoiseKind::kWhite : NoiseKind::kPink;
    train.entries.push_back(make_entry("train", i, train_snrs[i % 5], kind,
                                       1000 + i, 5000 + i));
  }
  ManifestSplit eval{"eval", {}};
  for (int i = 0; i < 20; ++i) {
    const NoiseKind kind = i % 2 == 0 ? NoiseKind::kWhite : NoiseKind::kPink;
    eval.entries.push_back(
        make_entry("eval", i, train_snrs[i % 5], kind, 3000 + i, 7000 + i));
  }
  // Held-out noise kinds in the test split.
  const double test_snrs[] = {-5.0, 0.0, 5.0, 10.0};
  ManifestSplit test{"test", {}};
  for (int i = 0; i < 20; ++i) {
    const NoiseKind kind =
        i % 2 == 0 ? NoiseKind::kModulated : NoiseKind::kMultitoneBabble;
    test.entries.push_back(
        make_entry("test", i, test_snrs[i % 4], kind, 4000 + i, 8000 + i));
  }
  manifest.splits = {train, eval, test};
  return format_manifest(manifest);
}

void build_dataset(const Manifest& manifest,
                   const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string());

  for (const ManifestSplit& split : manifest.splits) {
    const fs::path split_dir = out_dir / split.name;
    fs::create_directories(split_dir, ec);
    if (ec) throw IoError("cannot create " + split_dir.string());

    for (const ManifestEntry& entry : split.entries) {
      const MixSpec& mix = entry.mix;
      const double speech_dur = mix.duration_s - mix.leading_pause_s;
      Waveform speech =
          synth_speech(mix.speech_seed, speech_dur, manifest.sample_rate);
      if (mix.leading_pause_s > 0.0) {
        const std::size_t pause =
            sample_count(mix.leading_pause_s, manifest.sample_rate);
        speech.samples.insert(speech.samples.begin(), pause, 0.0);
      }
      const Waveform noise = synth_noise(mix.noise_kind, mix.seed,
                                         mix.duration_s, manifest.sample_rate);
      Waveform noise_cut = noise;
      noise_cut.samples.resize(speech.samples.size());
      MixResult mixed = mix_at_snr(speech, noise_cut, mix.snr_db);

      // Joint rescale so that the sample-wise sum of the quantized clean
      // and noise components cannot overflow 16-bit range.
      double peak_c = 0.0, peak_n = 0.0;
      for (double s : speech.samples) peak_c = std::max(peak_c, std::fabs(s));
      for (double s : mixed.scaled_noise.samples) {
        peak_n = std::max(peak_n, std::fabs(s));
      }
      const double g = 0.99 / std::max(peak_c + peak_n, 1e-12);

      const std::size_t n = speech.samples.size();
      Waveform clean_q{std::vector<double>(n), manifest.sample_rate};
      Waveform noise_q{std::vector<double>(n), manifest.sample_rate};
      Waveform noisy_q{std::vector<double>(n), manifest.sample_rate};
      for (std::size_t i = 0; i < n; ++i) {
        const long qc = std::lround(g * speech.samples[i] * 32767.0);
        const long qn = std::lround(g * mixed.scaled_noise.samples[i] * 32767.0);
        clean_q.samples[i] = static_cast<double>(qc) / 32767.0;
        noise_q.samples[i] = static_cast<double>(qn) / 32767.0;
        noisy_q.samples[i] = static_cast<double>(qc + qn) / 32767.0;
      }

      write_wav(split_dir / (entry.id + ".clean.wav"), clean_q);
      write_wav(split_dir / (entry.id + ".noise.wav"), noise_q);
      write_wav(split_dir / (entry.id + ".noisy.wav"), noisy_q);
    }
  }

  std::ofstream mf(out_dir / "manifest.txt", std::ios::trunc);
  if (!mf) throw IoError("cannot write manifest copy");
  mf << format_manifest(manifest);
}

}  // namespace rnse
