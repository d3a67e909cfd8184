// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Desk-scale trainable mask estimator: a per-frame feedforward network
// over causal log-magnitude context features, with explicit forward and
// backward passes and an Adam optimizer. 64-bit arithmetic throughout so
// gradients can be checked against finite differences tightly.

#ifndef RNSE_MODEL_HPP_
#define RNSE_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rnse/losses.hpp"
#include "rnse/signal.hpp"

namespace rnse {

enum class Activation { kElu, kRelu };

Activation activation_from_string(const std::string& name);
std::string to_string(Activation a);

struct DenseLayer {
  Grid weights;  // out x in
  std::vector<double> bias;
};

// Hidden layers use the configured activation; the output layer is
// sigmoid, so emitted masks lie strictly inside (0, 1). The prediction
// for frame l consumes the features of frames l-context+1 .. l only.
struct MaskNet {
  int context = 5;
  int bins = 0;
  Activation activation = Activation::kElu;
  std::vector<DenseLayer> layers;

  int input_dim() const { return context * bins; }
  std::size_t parameter_count() const;
};

MaskNet make_mask_net(int context, int bins, const std::vector<int>& hidden,
                      Activation activation, std::uint64_t seed);

// Per-frame causal features: concatenated log(1 + |X|) of the current and
// previous context-1 frames, zero-padded before the first frame.
Grid features(const MagnitudeSpectrogram& noisy_mag, int context);

struct ForwardCache {
  Grid input;
  std::vector<Grid> pre;   // pre-activation per layer
  std::vector<Grid> post;  // post-activation per layer (last = mask)
};

GainMask forward(const MaskNet& net, const Grid& feats,
                 ForwardCache* cache = nullptr);

struct NetGradients {
  std::vector<DenseLayer> layers;  // same shapes as the net
};

NetGradients backward(const MaskNet& net, const ForwardCache& cache,
                      const Grid& grad_mask);

struct AdamState {
  std::vector<DenseLayer> m;
  std::vector<DenseLayer> v;
  long step = 0;
};

AdamState make_adam_state(const MaskNet& net);

struct TrainConfig {
  int epochs = 30;
  int batch_size = 1;  // utterances per optimizer step
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 1;
  LossKind loss = LossKind::kGeneralized;
  LossParams loss_params;

  void validate() const;
};

void adam_step(MaskNet& net, const NetGradients& grads, AdamState& state,
               const TrainConfig& config);

// Everything a loss evaluation needs for one utterance.
struct TrainExample {
  std::string id;
  double snr_db = 0.0;
  std::string noise_kind;
  ComplexSpectrogram noisy_spec;
  MagnitudeSpectrogram noisy_mag;
  MagnitudeSpectrogram clean_mag;
  MagnitudeSpectrogram noise_mag;
  Waveform clean_padded;  // zero-padded to the synthesis length
};

TrainExample make_train_example(const std::string& id, const Waveform& noisy,
                                const Waveform& clean, const Waveform& noise,
                                const StftConfig& config);

LossResult evaluate_loss(LossKind kind, const LossParams& params,
                         const TrainExample& example, const GainMask& mask);

// Whole-utterance steps in a seed-shuffled order; returns the per-epoch
// mean training loss (accumulated in dataset order, so the history is
// independent of the visiting order). Bit-reproducible given the seed.
std::vector<double> train(MaskNet& net,
                          const std::vector<TrainExample>& dataset,
                          const TrainConfig& config);

// Checkpoint container: "RNSECKPT" magic, version, architecture and stft
// config fields, then raw little-endian float64 parameters. Save/load
// round trips are bit exact.
struct Checkpoint {
  MaskNet net;
  StftConfig stft;
  int sample_rate = 16000;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rnse

#endif  // RNSE_MODEL_HPP_
