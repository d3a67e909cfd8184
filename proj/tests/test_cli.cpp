// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rnse/cli.hpp"
#include "rnse/errors.hpp"
#include "rnse/metrics.hpp"
#include "rnse/wave_io.hpp"
#include "test_util.hpp"

using namespace rnse;

namespace {

// Two utterances per split, short and at 8 kHz, to keep commands quick.
std::string tiny_manifest() {
  return
      "sample_rate 8000\n"
      "duration_s 1.0\n"
      "leading_pause_s 0\n"
      "[train]\n"
      "utt tr0 speech_seed 1 noise white noise_seed 11 snr_db 0\n"
      "utt tr1 speech_seed 2 noise pink noise_seed 12 snr_db 5\n"
      "[test]\n"
      "utt te0 speech_seed 3 noise modulated noise_seed 13 snr_db 0\n"
      "utt te1 speech_seed 4 noise babble noise_seed 14 snr_db 5\n";
}

std::string write_file(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
  return path.string();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

struct DataDir {
  testutil::TempDir dir{"cli"};
  std::string data;

  DataDir() {
    const std::string manifest =
        write_file(dir.path() / "manifest_in.txt", tiny_manifest());
    SynthOptions synth;
    synth.manifest_path = manifest;
    synth.out_dir = (dir.path() / "data").string();
    REQUIRE(cmd_synth(synth) == kExitOk);
    data = synth.out_dir;
  }
};

std::string train_config(const DataDir& d, const std::string& name,
                         const std::string& extra) {
  const std::string body =
      "data_dir " + d.data + "\n" +
      "split train\n"
      "epochs 2\n"
      "learning_rate 0.002\n"
      "seed 9\n"
      "context 2\n"
      "hidden 8\n"
      "checkpoint_out " + (d.dir.path() / (name + ".ckpt")).string() + "\n" +
      "loss_log_out " + (d.dir.path() / (name + ".csv")).string() + "\n" +
      extra;
  return write_file(d.dir.path() / (name + ".cfg"), body);
}

}  // namespace

TEST_CASE("synth writes the manifest's utterances and is idempotent") {
  DataDir d;
  for (const char* split : {"train", "test"}) {
    for (int i = 0; i < 2; ++i) {
      const std::string stem = std::string(split == std::string("train")
                                               ? "tr"
                                               : "te") + std::to_string(i);
      for (const char* part : {".clean.wav", ".noise.wav", ".noisy.wav"}) {
        CHECK(std::filesystem::exists(std::filesystem::path(d.data) / split /
                                      (stem + part)));
      }
    }
  }

  const std::string before =
      read_file(std::filesystem::path(d.data) / "train" / "tr0.noisy.wav");
  SynthOptions again;
  again.manifest_path = (d.dir.path() / "manifest_in.txt").string();
  again.out_dir = d.data;
  CHECK(cmd_synth(again) == kExitOk);
  CHECK(read_file(std::filesystem::path(d.data) / "train" / "tr0.noisy.wav") ==
        before);

  SynthOptions missing;
  missing.manifest_path = (d.dir.path() / "nope.txt").string();
  missing.out_dir = (d.dir.path() / "d2").string();
  CHECK(cmd_synth(missing) == kExitData);
}

TEST_CASE("default manifest synthesizes 100 utterances") {
  // Parse-level check; the full build is exercised in the corpus tests.
  const Manifest m = parse_manifest(default_desk_manifest());
  std::size_t total = 0;
  for (const ManifestSplit& s : m.splits) total += s.entries.size();
  CHECK(total == 100);
}

TEST_CASE("train writes a checkpoint and a loss log") {
  DataDir d;
  TrainOptions opts;
  opts.config_path = train_config(d, "gl", "loss gl\nmu 1\nbeta0_db -20\n");
  REQUIRE(cmd_train(opts) == kExitOk);
  CHECK(std::filesystem::exists(d.dir.path() / "gl.ckpt"));
  const std::string log = read_file(d.dir.path() / "gl.csv");
  CHECK(log.find("epoch,mean_loss") == 0);

  TrainOptions bad;
  bad.config_path = (d.dir.path() / "missing.cfg").string();
  CHECK(cmd_train(bad) == kExitData);
}

TEST_CASE("generalized loss with zero target trains identically to components") {
  DataDir d;
  TrainOptions gl;
  gl.config_path =
      train_config(d, "glz", "loss gl\nmu 0.5\nbeta0_db -inf\n");
  TrainOptions cl;
  cl.config_path = train_config(d, "clz", "loss cl\nmu 0.5\n");
  REQUIRE(cmd_train(gl) == kExitOk);
  REQUIRE(cmd_train(cl) == kExitOk);
  CHECK(read_file(d.dir.path() / "glz.csv") ==
        read_file(d.dir.path() / "clz.csv"));
  CHECK(read_file(d.dir.path() / "glz.ckpt") ==
        read_file(d.dir.path() / "clz.ckpt"));
}

TEST_CASE("zero epochs keeps the seeded initialization") {
  DataDir d;
  TrainOptions opts;
  opts.config_path =
      train_config(d, "init", "loss gl\nepochs 0\nbeta0_db -20\n");
  REQUIRE(cmd_train(opts) == kExitOk);
  const Checkpoint ckpt = load_checkpoint(d.dir.path() / "init.ckpt");
  const MaskNet fresh =
      make_mask_net(2, ckpt.stft.bins(), {8}, Activation::kElu, 9);
  REQUIRE(ckpt.net.layers.size() == fresh.layers.size());
  for (std::size_t li = 0; li < fresh.layers.size(); ++li) {
    CHECK(ckpt.net.layers[li].weights == fresh.layers[li].weights);
    CHECK(ckpt.net.layers[li].bias == fresh.layers[li].bias);
  }
}

TEST_CASE("enhance modes") {
  DataDir d;
  const auto base = std::filesystem::path(d.data) / "test" / "te0";

  SUBCASE("oracle wiener improves over the noisy input") {
    EnhanceOptions opts;
    opts.input_wav = (base.string() + ".noisy.wav");
    opts.output_wav = (d.dir.path() / "enh.wav").string();
    opts.mode = "wiener";
    opts.mu = 1.0;
    opts.clean_wav = base.string() + ".clean.wav";
    opts.noise_wav = base.string() + ".noise.wav";
    REQUIRE(cmd_enhance(opts) == kExitOk);

    const Waveform clean = read_wav(base.string() + ".clean.wav");
    const Waveform noisy = read_wav(base.string() + ".noisy.wav");
    const Waveform enhanced = read_wav(opts.output_wav);
    CHECK(sdr(clean, enhanced) > sdr(clean, noisy));
  }

  SUBCASE("parametric mode with mu 0 passes the signal through") {
    EnhanceOptions opts;
    opts.input_wav = (base.string() + ".noisy.wav");
    opts.output_wav = (d.dir.path() / "ident.wav").string();
    opts.mode = "parametric";
    opts.mu = 0.0;
    opts.gamma = 2.0;
    opts.alpha = 1.0;
    opts.clean_wav = base.string() + ".clean.wav";
    opts.noise_wav = base.string() + ".noise.wav";
    REQUIRE(cmd_enhance(opts) == kExitOk);

    const Waveform in = read_wav(opts.input_wav);
    const Waveform out = read_wav(opts.output_wav);
    const int frame = StftConfig::for_rate(in.sample_rate).frame_len;
    for (std::size_t i = frame; i + frame < in.samples.size(); ++i) {
      CHECK(std::fabs(out.samples[i] - in.samples[i]) <= 1.0 / 32767.0);
    }
  }

  SUBCASE("oracle modes without companions are usage errors") {
    EnhanceOptions opts;
    opts.input_wav = (base.string() + ".noisy.wav");
    opts.output_wav = (d.dir.path() / "x.wav").string();
    opts.mode = "wiener";
    CHECK(cmd_enhance(opts) == kExitUsage);
  }

  SUBCASE("model mode runs from a trained checkpoint") {
    TrainOptions train_opts;
    train_opts.config_path =
        train_config(d, "m", "loss gl\nmu 1\nbeta0_db -20\n");
    REQUIRE(cmd_train(train_opts) == kExitOk);

    EnhanceOptions opts;
    opts.input_wav = (base.string() + ".noisy.wav");
    opts.output_wav = (d.dir.path() / "model.wav").string();
    opts.mode = "model";
    opts.checkpoint = (d.dir.path() / "m.ckpt").string();
    REQUIRE(cmd_enhance(opts) == kExitOk);
    const Waveform out = read_wav(opts.output_wav);
    CHECK(out.samples.size() ==
          read_wav(opts.input_wav).samples.size());
  }
}

TEST_CASE("eval emits per-utterance rows plus an aggregate") {
  DataDir d;
  EvalOptions opts;
  opts.data_dir = d.data;
  opts.split = "test";
  opts.mode = "unit";
  opts.report_csv = (d.dir.path() / "unit.csv").string();
  REQUIRE(cmd_eval(opts) == kExitOk);

  std::ifstream in(opts.report_csv);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "id,snr_db,noise_kind,na_db,sa_db,sdr_db,si_sdr_db,noisy_sdr_db");
  int rows = 0;
  std::string line;
  bool saw_aggregate = false;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream ls(line);
    std::string id, snr, kind, na, sa;
    std::getline(ls, id, ',');
    std::getline(ls, snr, ',');
    std::getline(ls, kind, ',');
    std::getline(ls, na, ',');
    std::getline(ls, sa, ',');
    CHECK(std::stod(na) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::stod(sa) == doctest::Approx(0.0).epsilon(1e-9));
    saw_aggregate = saw_aggregate || id == "aggregate";
  }
  CHECK(rows == 3);  // two utterances + aggregate
  CHECK(saw_aggregate);
}

TEST_CASE("eval resolves the data root from the environment") {
  DataDir d;
  setenv("RNSE_DATA_ROOT", d.data.c_str(), 1);
  EvalOptions opts;
  opts.split = "test";
  opts.mode = "unit";
  opts.report_csv = (d.dir.path() / "env.csv").string();
  CHECK(cmd_eval(opts) == kExitOk);
  unsetenv("RNSE_DATA_ROOT");
}

TEST_CASE("eval sweep produces one row per entry") {
  DataDir d;
  const std::string sweep = write_file(
      d.dir.path() / "sweep.cfg",
      "entry passthrough mode unit\n"
      "entry wiener1 mode wiener mu 1\n"
      "entry wiener4 mode wiener mu 4\n");
  EvalOptions opts;
  opts.data_dir = d.data;
  opts.split = "test";
  opts.report_csv = (d.dir.path() / "sweep.csv").string();
  opts.sweep_config = sweep;
  REQUIRE(cmd_eval(opts) == kExitOk);

  std::ifstream in(opts.report_csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "label,na_db,sa_db,sdr_db,si_sdr_db");
  std::vector<double> na;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string label, value;
    std::getline(ls, label, ',');
    std::getline(ls, value, ',');
    na.push_back(std::stod(value));
  }
  REQUIRE(na.size() == 3);
  CHECK(na[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(na[1] > 0.0);   // wiener attenuates
  CHECK(na[2] > na[1]);  // larger mu attenuates more
}

TEST_CASE("verify runs its hard checks and writes a report") {
  testutil::TempDir dir("verify");
  VerifyOptions opts;
  opts.report_csv = (dir.path() / "verify.csv").string();
  opts.n = 60000;
  opts.grid = 400;
  opts.seed = 3;
  opts.gammas = {1.0, 2.0};
  CHECK(cmd_verify(opts) == kExitOk);

  const std::string report = read_file(dir.path() / "verify.csv");
  CHECK(report.find("skipped") != std::string::npos);  // gamma 1 rows
  CHECK(report.find("FAIL") == std::string::npos);
  CHECK(report.find("pass") != std::string::npos);
}
