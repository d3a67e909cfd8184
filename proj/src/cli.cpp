// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rnse/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "rnse/errors.hpp"
#include "rnse/mathutil.hpp"
#include "rnse/metrics.hpp"
#include "rnse/oracle.hpp"
#include "rnse/wave_io.hpp"

namespace rnse {
namespace {

double parse_double_token(const std::string& tok) {
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(tok, &used);
  if (used != tok.size()) throw ConfigError("bad number: " + tok);
  return v;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

}  // namespace

KvConfig KvConfig::parse(const std::string& text) {
  KvConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    std::string value;
    if (!(ls >> value)) {
      throw ConfigError("missing value at line " + std::to_string(line_no));
    }
    std::string extra;
    if (ls >> extra && extra[0] != '#') {
      throw ConfigError("trailing tokens at line " + std::to_string(line_no));
    }
    config.map_[key] = value;
  }
  return config;
}

KvConfig KvConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse(text);
}

bool KvConfig::has(const std::string& key) const { return map_.count(key) > 0; }

std::string KvConfig::get(const std::string& key,
                          const std::string& fallback) const {
  const auto it = map_.find(key);
  return it == map_.end() ? fallback : it->second;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  const auto it = map_.find(key);
  return it == map_.end() ? fallback : parse_double_token(it->second);
}

long KvConfig::get_long(const std::string& key, long fallback) const {
  const auto it = map_.find(key);
  return it == map_.end() ? fallback : std::stol(it->second);
}

MaskMode mask_mode_from_string(const std::string& name) {
  if (name == "model") return MaskMode::kModel;
  if (name == "wiener") return MaskMode::kWiener;
  if (name == "parametric") return MaskMode::kParametric;
  if (name == "unit") return MaskMode::kUnit;
  throw ValueError("unknown mask mode: " + name);
}

std::vector<LoadedUtterance> load_split(const std::string& data_dir,
                                        const std::string& split) {
  namespace fs = std::filesystem;
  const Manifest manifest = load_manifest(fs::path(data_dir) / "manifest.txt");
  const ManifestSplit* s = manifest.find_split(split);
  if (s == nullptr) throw ManifestError("split not found: " + split);

  std::vector<LoadedUtterance> out;
  out.reserve(s->entries.size());
  for (const ManifestEntry& entry : s->entries) {
    LoadedUtterance u;
    u.entry = entry;
    const fs::path dir = fs::path(data_dir) / split;
    u.clean = read_wav(dir / (entry.id + ".clean.wav"));
    u.noise = read_wav(dir / (entry.id + ".noise.wav"));
    u.noisy = read_wav(dir / (entry.id + ".noisy.wav"));
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<TrainExample> make_train_examples(
    const std::vector<LoadedUtterance>& utterances, const StftConfig& config) {
  std::vector<TrainExample> out;
  out.reserve(utterances.size());
  for (const LoadedUtterance& u : utterances) {
    TrainExample ex =
        make_train_example(u.entry.id, u.noisy, u.clean, u.noise, config);
    ex.snr_db = u.entry.mix.snr_db;
    ex.noise_kind = to_string(u.entry.mix.noise_kind);
    out.push_back(std::move(ex));
  }
  return out;
}

GainMask compute_mask(const EvalSpec& spec, const ComplexSpectrogram& noisy,
                      const MagnitudeSpectrogram& clean_mag,
                      const MagnitudeSpectrogram& noise_mag) {
  switch (spec.mode) {
    case MaskMode::kUnit: {
      GainMask mask;
      mask.values = Grid(noisy.frames(), noisy.bins(), 1.0);
      return mask;
    }
    case MaskMode::kModel: {
      if (spec.checkpoint == nullptr) {
        throw ValueError("model mode requires a checkpoint");
      }
      const MagnitudeSpectrogram noisy_mag = magnitude(noisy);
      const Grid feats = features(noisy_mag, spec.checkpoint->net.context);
      return forward(spec.checkpoint->net, feats);
    }
    case MaskMode::kWiener: {
      const SnrField snr = a_priori_snr(clean_mag, noise_mag);
      return wiener_gain(snr, spec.mu);
    }
    case MaskMode::kParametric: {
      const SnrField snr = a_priori_snr(clean_mag, noise_mag);
      GainParams params;
      params.mu = spec.mu;
      params.gamma = spec.gamma;
      params.alpha = spec.alpha;
      return parametric_gain(snr, params);
    }
  }
  throw ValueError("unknown mask mode");
}

std::vector<UtteranceMetrics> evaluate_utterances(
    const std::vector<LoadedUtterance>& utterances, const EvalSpec& spec,
    const StftConfig& config) {
  std::vector<UtteranceMetrics> rows;
  rows.reserve(utterances.size());
  for (const LoadedUtterance& u : utterances) {
    const ComplexSpectrogram noisy_spec = stft(u.noisy, config);
    const ComplexSpectrogram clean_spec = stft(u.clean, config);
    const ComplexSpectrogram noise_spec = stft(u.noise, config);
    const GainMask mask = compute_mask(spec, noisy_spec, magnitude(clean_spec),
                                       magnitude(noise_spec));

    Waveform enhanced = istft(apply_mask(noisy_spec, mask));
    enhanced.samples.resize(u.clean.samples.size());

    UtteranceMetrics m;
    m.id = u.entry.id;
    m.snr_db = u.entry.mix.snr_db;
    m.noise_kind = to_string(u.entry.mix.noise_kind);
    m.na_db = noise_attenuation(noise_spec, mask);
    m.sa_db = speech_attenuation(clean_spec, mask);
    m.sdr_db = sdr(u.clean, enhanced);
    m.si_sdr_db = si_sdr_metric(u.clean, enhanced);
    m.noisy_sdr_db = sdr(u.clean, u.noisy);
    rows.push_back(std::move(m));
  }
  return rows;
}

UtteranceMetrics aggregate_metrics(const std::vector<UtteranceMetrics>& rows) {
  UtteranceMetrics agg;
  agg.id = "aggregate";
  agg.noise_kind = "all";
  if (rows.empty()) return agg;
  for (const UtteranceMetrics& r : rows) {
    agg.snr_db += r.snr_db;
    agg.na_db += r.na_db;
    agg.sa_db += r.sa_db;
    agg.sdr_db += r.sdr_db;
    agg.si_sdr_db += r.si_sdr_db;
    agg.noisy_sdr_db += r.noisy_sdr_db;
  }
  const double n = static_cast<double>(rows.size());
  agg.snr_db /= n;
  agg.na_db /= n;
  agg.sa_db /= n;
  agg.sdr_db /= n;
  agg.si_sdr_db /= n;
  agg.noisy_sdr_db /= n;
  return agg;
}

namespace {

void write_metric_csv(const std::string& path,
                      const std::vector<UtteranceMetrics>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write report " + path);
  out << "id,snr_db,noise_kind,na_db,sa_db,sdr_db,si_sdr_db,noisy_sdr_db\n";
  const auto emit = [&out](const UtteranceMetrics& m) {
    out << m.id << ',' << m.snr_db << ',' << m.noise_kind << ',' << m.na_db
        << ',' << m.sa_db << ',' << m.sdr_db << ',' << m.si_sdr_db << ','
        << m.noisy_sdr_db << '\n';
  };
  for (const UtteranceMetrics& m : rows) emit(m);
  emit(aggregate_metrics(rows));
  if (!out) throw IoError("write failure on " + path);
}

std::string data_root_or(const std::string& data_dir) {
  if (!data_dir.empty()) return data_dir;
  const char* env = std::getenv("RNSE_DATA_ROOT");
  if (env != nullptr && env[0] != '\0') return env;
  throw ConfigError("no data directory given and RNSE_DATA_ROOT unset");
}

}  // namespace

int cmd_synth(const SynthOptions& options) {
  try {
    if (options.out_dir.empty()) {
      std::cerr << "synth: missing output directory\n";
      return kExitUsage;
    }
    const Manifest manifest =
        options.manifest_path.empty()
            ? parse_manifest(default_desk_manifest())
            : load_manifest(options.manifest_path);
    build_dataset(manifest, options.out_dir);
    std::size_t total = 0;
    for (const ManifestSplit& s : manifest.splits) total += s.entries.size();
    std::cout << "synth: wrote " << total << " utterances to "
              << options.out_dir << "\n";
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "synth: " << e.what() << "\n";
    return kExitData;
  }
}

int cmd_train(const TrainOptions& options) {
  try {
    const KvConfig config = KvConfig::load(options.config_path);

    const std::string data_dir = data_root_or(config.get("data_dir", ""));
    const std::string split = config.get("split", "train");

    TrainConfig tc;
    tc.epochs = static_cast<int>(config.get_long("epochs", 30));
    tc.batch_size = static_cast<int>(config.get_long("batch_size", 1));
    tc.learning_rate = config.get_double("learning_rate", 1e-3);
    tc.adam_beta1 = config.get_double("adam_beta1", 0.9);
    tc.adam_beta2 = config.get_double("adam_beta2", 0.999);
    tc.adam_eps = config.get_double("adam_eps", 1e-8);
    tc.seed = static_cast<std::uint64_t>(config.get_long("seed", 1));
    tc.loss = loss_kind_from_string(config.get("loss", "gl"));
    tc.loss_params.gamma = config.get_double("gamma", 2.0);
    tc.loss_params.alpha = config.get_double("alpha", 1.0);
    tc.loss_params.mu = config.get_double("mu", 1.0);
    if (config.has("beta0_db")) {
      tc.loss_params.beta0 =
          LossParams::beta0_from_db(config.get_double("beta0_db", -20.0));
    } else {
      tc.loss_params.beta0 = config.get_double("beta0", 0.1);
    }

    const std::vector<LoadedUtterance> utts = load_split(data_dir, split);
    if (utts.empty()) throw ManifestError("empty split: " + split);
    const StftConfig stft_config =
        StftConfig::for_rate(utts.front().clean.sample_rate);
    const std::vector<TrainExample> dataset =
        make_train_examples(utts, stft_config);

    const int context = static_cast<int>(config.get_long("context", 5));
    std::vector<int> hidden = parse_int_list(config.get("hidden", "256,256"));
    const Activation activation =
        activation_from_string(config.get("activation", "elu"));

    MaskNet net = make_mask_net(context, stft_config.bins(), hidden,
                                activation, tc.seed);
    const std::vector<double> history = train(net, dataset, tc);

    Checkpoint ckpt;
    ckpt.net = std::move(net);
    ckpt.stft = stft_config;
    ckpt.sample_rate = utts.front().clean.sample_rate;
    const std::string ckpt_path = config.get("checkpoint_out", "model.ckpt");
    save_checkpoint(ckpt_path, ckpt);

    const std::string log_path = config.get("loss_log_out", "loss_log.csv");
    std::ofstream log(log_path, std::ios::trunc);
    if (!log) throw IoError("cannot write loss log " + log_path);
    log << "epoch,mean_loss\n";
    log.precision(17);
    for (std::size_t e = 0; e < history.size(); ++e) {
      log << e << ',' << history[e] << '\n';
    }
    std::cout << "train: " << history.size() << " epochs, checkpoint "
              << ckpt_path << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "train: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "train: " << e.what() << "\n";
    return kExitData;
  }
}

int cmd_enhance(const EnhanceOptions& options) {
  try {
    const MaskMode mode = mask_mode_from_string(options.mode);
    const Waveform noisy = read_wav(options.input_wav);

    Checkpoint ckpt;
    EvalSpec spec;
    spec.mode = mode;
    spec.mu = options.mu;
    spec.gamma = options.gamma;
    spec.alpha = options.alpha;

    StftConfig config;
    if (mode == MaskMode::kModel) {
      if (options.checkpoint.empty()) {
        std::cerr << "enhance: model mode requires --checkpoint\n";
        return kExitUsage;
      }
      ckpt = load_checkpoint(options.checkpoint);
      spec.checkpoint = &ckpt;
      config = ckpt.stft;
    } else {
      config = StftConfig::for_rate(noisy.sample_rate);
    }

    MagnitudeSpectrogram clean_mag, noise_mag;
    if (mode == MaskMode::kWiener || mode == MaskMode::kParametric) {
      if (options.clean_wav.empty() || options.noise_wav.empty()) {
        std::cerr << "enhance: oracle modes require --clean and --noise\n";
        return kExitUsage;
      }
      clean_mag = magnitude(stft(read_wav(options.clean_wav), config));
      noise_mag = magnitude(stft(read_wav(options.noise_wav), config));
    }

    const ComplexSpectrogram noisy_spec = stft(noisy, config);
    const GainMask mask = compute_mask(spec, noisy_spec, clean_mag, noise_mag);
    Waveform enhanced = istft(apply_mask(noisy_spec, mask));
    enhanced.samples.resize(noisy.samples.size());
    enhanced.sample_rate = noisy.sample_rate;
    write_wav(options.output_wav, enhanced);
    std::cout << "enhance: wrote " << options.output_wav << "\n";
    return kExitOk;
  } catch (const ValueError& e) {
    std::cerr << "enhance: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "enhance: " << e.what() << "\n";
    return kExitData;
  }
}

int cmd_eval(const EvalOptions& options) {
  try {
    const std::string data_dir = data_root_or(options.data_dir);
    const std::vector<LoadedUtterance> utts =
        load_split(data_dir, options.split);
    if (utts.empty()) throw ManifestError("empty split: " + options.split);
    const StftConfig config =
        StftConfig::for_rate(utts.front().clean.sample_rate);

    if (options.report_csv.empty()) {
      std::cerr << "eval: missing --report path\n";
      return kExitUsage;
    }

    if (!options.sweep_config.empty()) {
      // One aggregate row per sweep entry.
      std::ifstream in(options.sweep_config);
      if (!in) throw IoError("cannot open sweep config");
      std::ofstream out(options.report_csv, std::ios::trunc);
      if (!out) throw IoError("cannot write report");
      out << "label,na_db,sa_db,sdr_db,si_sdr_db\n";

      std::string line;
      while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head) || head[0] == '#') continue;
        if (head != "entry") throw ConfigError("sweep rows start with 'entry'");
        std::string label;
        if (!(ls >> label)) throw ConfigError("sweep entry without label");
        EvalSpec spec;
        Checkpoint ckpt;
        std::string key, value;
        bool has_ckpt = false;
        while (ls >> key >> value) {
          if (key == "mode") {
            spec.mode = mask_mode_from_string(value);
          } else if (key == "checkpoint") {
            ckpt = load_checkpoint(value);
            has_ckpt = true;
          } else if (key == "mu") {
            spec.mu = parse_double_token(value);
          } else if (key == "gamma") {
            spec.gamma = parse_double_token(value);
          } else if (key == "alpha") {
            spec.alpha = parse_double_token(value);
          } else {
            throw ConfigError("unknown sweep key: " + key);
          }
        }
        if (has_ckpt) spec.checkpoint = &ckpt;
        const std::vector<UtteranceMetrics> rows =
            evaluate_utterances(utts, spec, config);
        const UtteranceMetrics agg = aggregate_metrics(rows);
        out << label << ',' << agg.na_db << ',' << agg.sa_db << ','
            << agg.sdr_db << ',' << agg.si_sdr_db << '\n';
      }
      std::cout << "eval: wrote sweep table " << options.report_csv << "\n";
      return kExitOk;
    }

    EvalSpec spec;
    spec.mode = mask_mode_from_string(options.mode);
    spec.mu = options.mu;
    spec.gamma = options.gamma;
    spec.alpha = options.alpha;
    Checkpoint ckpt;
    if (spec.mode == MaskMode::kModel) {
      if (options.checkpoint.empty()) {
        std::cerr << "eval: model mode requires --checkpoint\n";
        return kExitUsage;
      }
      ckpt = load_checkpoint(options.checkpoint);
      spec.checkpoint = &ckpt;
    }
    const std::vector<UtteranceMetrics> rows =
        evaluate_utterances(utts, spec, config);
    write_metric_csv(options.report_csv, rows);
    std::cout << "eval: wrote " << rows.size() << " rows to "
              << options.report_csv << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "eval: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "eval: " << e.what() << "\n";
    return kExitData;
  }
}

int cmd_verify(const VerifyOptions& options) {
  try {
    std::ofstream report;
    const bool to_file = !options.report_csv.empty();
    if (to_file) {
      report.open(options.report_csv, std::ios::trunc);
      if (!report) throw IoError("cannot write report");
    }
    std::ostream& out = to_file ? report : std::cout;
    out << "check,gamma,alpha,xi,mu,expected,observed,delta,tol,status\n";

    bool hard_failure = false;
    const double grid_step = 1.0 / static_cast<double>(options.grid - 1);
    const double gain_tol = std::max(0.02, 5.0 * grid_step);
    std::uint64_t seed = options.seed;

    const double xis[] = {0.25, 1.0, 4.0};
    const double mus[] = {0.5, 1.0, 2.0};

    for (double gamma : options.gammas) {
      for (double alpha : {1.0, 2.0}) {
        for (double xi : xis) {
          for (double mu : mus) {
            ++seed;
            if (gamma <= 1.0) {
              out << "gain," << gamma << ',' << alpha << ',' << xi << ',' << mu
                  << ",,,," << gain_tol << ",skipped (closed form singular)\n";
              continue;
            }
            GaussianPrior prior{xi, 1.0};
            const double observed = brute_force_optimal_gain(
                prior, mu, gamma, alpha, options.grid, options.n, seed);
            GainParams params{mu, gamma, alpha};
            SnrField snr;
            snr.values = Grid(1, 1, xi);
            const double expected = parametric_gain(snr, params).values[0];
            const double delta = std::fabs(observed - expected);
            // Hard check at gamma == 2 where the closed form is exact;
            // informational elsewhere.
            const bool hard = gamma == 2.0;
            const bool ok = delta <= gain_tol;
            if (hard && !ok) hard_failure = true;
            out << "gain," << gamma << ',' << alpha << ',' << xi << ',' << mu
                << ',' << expected << ',' << observed << ',' << delta << ','
                << gain_tol << ','
                << (ok ? "pass" : (hard ? "FAIL" : "mismatch (informational)"))
                << '\n';
          }
        }
      }
    }

    const double masks[] = {0.0, 0.3, 0.5, 0.8, 1.0};
    for (double m : masks) {
      ++seed;
      GaussianPrior prior{1.5, 0.7};
      const DecompositionReport rep =
          verify_decomposition(prior, m, options.n, seed);
      const bool ok = rep.cross_within_3_sigma;
      if (!ok) hard_failure = true;
      out << "decomposition,2,1,," << m << ",0," << rep.cross_mean << ','
          << std::fabs(rep.cross_mean) << ',' << 3.0 * rep.cross_std_error
          << ',' << (ok ? "pass" : "FAIL") << '\n';
    }

    if (hard_failure) {
      std::cerr << "verify: hard check failed\n";
      return kExitVerification;
    }
    std::cout << "verify: all hard checks passed\n";
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace rnse
