// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Command implementations behind the rnse executable. Each command
// returns a process exit code: 0 success, 1 usage error, 2 data error,
// 3 verification failure.
//
// Config files share one line-based format: "key value" pairs, '#'
// comments. Keys for train configs:
//   data_dir, split, loss (gl|cl|mse|tmse|sisdr), gamma, alpha, mu,
//   beta0_db (accepts -inf), epochs, batch_size, learning_rate,
//   adam_beta1, adam_beta2, adam_eps, seed, context, hidden (e.g. 128,128),
//   activation (elu|relu), checkpoint_out, loss_log_out
// Sweep configs list rows:
//   entry <label> mode <model|wiener|parametric|unit> [checkpoint <path>]
//       [mu <v>] [gamma <v>] [alpha <v>]

#ifndef RNSE_CLI_HPP_
#define RNSE_CLI_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rnse/corpus.hpp"
#include "rnse/estimators.hpp"
#include "rnse/model.hpp"

namespace rnse {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerification = 3;

// Flat "key value" file. Unknown keys are rejected by the consumers.
class KvConfig {
 public:
  static KvConfig parse(const std::string& text);
  static KvConfig load(const std::string& path);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  const std::map<std::string, std::string>& entries() const { return map_; }

 private:
  std::map<std::string, std::string> map_;
};

enum class MaskMode { kModel, kWiener, kParametric, kUnit };
MaskMode mask_mode_from_string(const std::string& name);

struct LoadedUtterance {
  ManifestEntry entry;
  Waveform clean;
  Waveform noise;
  Waveform noisy;
};

// Reads <data_dir>/manifest.txt and the WAV triples of one split.
std::vector<LoadedUtterance> load_split(const std::string& data_dir,
                                        const std::string& split);

std::vector<TrainExample> make_train_examples(
    const std::vector<LoadedUtterance>& utterances, const StftConfig& config);

struct UtteranceMetrics {
  std::string id;
  double snr_db = 0.0;
  std::string noise_kind;
  double na_db = 0.0;
  double sa_db = 0.0;
  double sdr_db = 0.0;
  double si_sdr_db = 0.0;
  double noisy_sdr_db = 0.0;
};

struct EvalSpec {
  MaskMode mode = MaskMode::kUnit;
  const Checkpoint* checkpoint = nullptr;  // required for kModel
  double mu = 1.0;
  double gamma = 2.0;
  double alpha = 1.0;
};

// Evaluates one mask source over loaded utterances (shadow-filtered NA/SA,
// SDR and SI-SDR on the resynthesized waveform).
std::vector<UtteranceMetrics> evaluate_utterances(
    const std::vector<LoadedUtterance>& utterances, const EvalSpec& spec,
    const StftConfig& config);

UtteranceMetrics aggregate_metrics(const std::vector<UtteranceMetrics>& rows);

// Computes the mask for one utterance per the eval spec.
GainMask compute_mask(const EvalSpec& spec, const ComplexSpectrogram& noisy,
                      const MagnitudeSpectrogram& clean_mag,
                      const MagnitudeSpectrogram& noise_mag);

struct SynthOptions {
  std::string manifest_path;  // empty selects the built-in desk manifest
  std::string out_dir;
};
int cmd_synth(const SynthOptions& options);

struct TrainOptions {
  std::string config_path;
};
int cmd_train(const TrainOptions& options);

struct EnhanceOptions {
  std::string input_wav;
  std::string output_wav;
  std::string mode;  // model | wiener | parametric | unit
  std::string checkpoint;
  std::string clean_wav;  // oracle companions for wiener/parametric
  std::string noise_wav;
  double mu = 1.0;
  double gamma = 2.0;
  double alpha = 1.0;
};
int cmd_enhance(const EnhanceOptions& options);

struct EvalOptions {
  std::string data_dir;  // empty falls back to $RNSE_DATA_ROOT
  std::string split = "test";
  std::string mode = "unit";
  std::string checkpoint;
  double mu = 1.0;
  double gamma = 2.0;
  double alpha = 1.0;
  std::string report_csv;
  std::string sweep_config;  // when set, emits one aggregate row per entry
};
int cmd_eval(const EvalOptions& options);

struct VerifyOptions {
  std::string report_csv;
  std::size_t n = 200000;
  std::size_t grid = 1000;
  std::uint64_t seed = 1;
  std::vector<double> gammas = {2.0};  // gamma != 2 rows are informational
};
int cmd_verify(const VerifyOptions& options);

}  // namespace rnse

#endif  // RNSE_CLI_HPP_
