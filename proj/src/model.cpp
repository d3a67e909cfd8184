// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rnse/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "rnse/errors.hpp"
#include "rnse/rng.hpp"

namespace rnse {
namespace {

// C (rows x n) = A (rows x k) * B^T with B (n x k). Row-major saxpy order
// keeps the inner loop contiguous for vectorization.
Grid matmul_nt(const Grid& a, const Grid& b) {
  Grid c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* brow = b.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += arow[k] * brow[k];
      crow[j] = acc;
    }
  }
  return c;
}

// C (rows x n) = A (rows x k) * B (k x n).
Grid matmul_nn(const Grid& a, const Grid& b) {
  Grid c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double s = arow[k];
      const double* brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += s * brow[j];
    }
  }
  return c;
}

// C (m x n) = A^T * B with A (rows x m), B (rows x n).
Grid matmul_tn(const Grid& a, const Grid& b) {
  Grid c(a.cols(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double* arow = a.row(r);
    const double* brow = b.row(r);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double s = arow[i];
      double* crow = c.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += s * brow[j];
    }
  }
  return c;
}

double activate(Activation a, double x) {
  if (a == Activation::kRelu) return x > 0.0 ? x : 0.0;
  return x > 0.0 ? x : std::expm1(x);
}

double activate_grad(Activation a, double pre) {
  if (a == Activation::kRelu) return pre > 0.0 ? 1.0 : 0.0;
  return pre > 0.0 ? 1.0 : std::exp(pre);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Activation activation_from_string(const std::string& name) {
  if (name == "elu") return Activation::kElu;
  if (name == "relu") return Activation::kRelu;
  throw ValueError("unknown activation: " + name);
}

std::string to_string(Activation a) {
  return a == Activation::kElu ? "elu" : "relu";
}

std::size_t MaskNet::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

MaskNet make_mask_net(int context, int bins, const std::vector<int>& hidden,
                      Activation activation, std::uint64_t seed) {
  if (context < 1) throw ValueError("context must be at least 1");
  if (bins < 1) throw ValueError("bins must be at least 1");
  for (int h : hidden) {
    if (h < 1) throw ValueError("hidden sizes must be positive");
  }
  MaskNet net;
  net.context = context;
  net.bins = bins;
  net.activation = activation;

  Rng rng(seed);
  std::vector<int> dims;
  dims.push_back(context * bins);
  for (int h : hidden) dims.push_back(h);
  dims.push_back(bins);
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    DenseLayer layer;
    const int in = dims[i], out = dims[i + 1];
    layer.weights = Grid(out, in);
    layer.bias.assign(out, 0.0);
    const double limit = std::sqrt(6.0 / (in + out));
    for (std::size_t j = 0; j < layer.weights.size(); ++j) {
      layer.weights[j] = rng.uniform(-limit, limit);
    }
    net.layers.push_back(std::move(layer));
  }
  return net;
}

Grid features(const MagnitudeSpectrogram& noisy_mag, int context) {
  if (context < 1) throw ValueError("context must be at least 1");
  const std::size_t frames = noisy_mag.frames();
  const std::size_t bins = noisy_mag.bins();
  Grid feats(frames, context * bins);
  for (std::size_t l = 0; l < frames; ++l) {
    for (int c = 0; c < context; ++c) {
      // Oldest context block first, current frame last.
      const long src = static_cast<long>(l) - (context - 1 - c);
      if (src < 0) continue;  // zero padding before the first frame
      double* dst = feats.row(l) + static_cast<std::size_t>(c) * bins;
      const double* mag = noisy_mag.values.row(static_cast<std::size_t>(src));
      for (std::size_t k = 0; k < bins; ++k) dst[k] = std::log1p(mag[k]);
    }
  }
  return feats;
}

GainMask forward(const MaskNet& net, const Grid& feats, ForwardCache* cache) {
  if (net.layers.empty()) throw ValueError("uninitialized network");
  if (feats.cols() != static_cast<std::size_t>(net.input_dim())) {
    throw ShapeError("feature dimension does not match network input");
  }
  if (cache != nullptr) {
    cache->input = feats;
    cache->pre.clear();
    cache->post.clear();
  }

  Grid x = feats;
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    const DenseLayer& layer = net.layers[li];
    Grid z = matmul_nt(x, layer.weights);
    for (std::size_t r = 0; r < z.rows(); ++r) {
      double* row = z.row(r);
      for (std::size_t j = 0; j < z.cols(); ++j) row[j] += layer.bias[j];
    }
    Grid h(z.rows(), z.cols());
    const bool last = li + 1 == net.layers.size();
    for (std::size_t i = 0; i < z.size(); ++i) {
      h[i] = last ? sigmoid(z[i]) : activate(net.activation, z[i]);
    }
    if (cache != nullptr) {
      cache->pre.push_back(z);
      cache->post.push_back(h);
    }
    x = std::move(h);
  }
  return GainMask{std::move(x)};
}

NetGradients backward(const MaskNet& net, const ForwardCache& cache,
                      const Grid& grad_mask) {
  const std::size_t n_layers = net.layers.size();
  if (cache.pre.size() != n_layers || cache.post.size() != n_layers) {
    throw ShapeError("cache does not match network depth");
  }
  if (!grad_mask.same_shape(cache.post.back())) {
    throw ShapeError("mask gradient shape mismatch");
  }

  NetGradients grads;
  grads.layers.resize(n_layers);

  // delta = d loss / d pre-activation of the current layer.
  Grid delta(grad_mask.rows(), grad_mask.cols());
  const Grid& mask = cache.post.back();
  for (std::size_t i = 0; i < delta.size(); ++i) {
    delta[i] = grad_mask[i] * mask[i] * (1.0 - mask[i]);
  }

  for (std::size_t li = n_layers; li-- > 0;) {
    const Grid& input = li == 0 ? cache.input : cache.post[li - 1];
    grads.layers[li].weights = matmul_tn(delta, input);
    grads.layers[li].bias.assign(net.layers[li].weights.rows(), 0.0);
    for (std::size_t r = 0; r < delta.rows(); ++r) {
      const double* row = delta.row(r);
      for (std::size_t j = 0; j < delta.cols(); ++j) {
        grads.layers[li].bias[j] += row[j];
      }
    }
    if (li == 0) break;
    Grid upstream = matmul_nn(delta, net.layers[li].weights);
    const Grid& pre = cache.pre[li - 1];
    delta = Grid(upstream.rows(), upstream.cols());
    for (std::size_t i = 0; i < delta.size(); ++i) {
      delta[i] = upstream[i] * activate_grad(net.activation, pre[i]);
    }
  }
  return grads;
}

AdamState make_adam_state(const MaskNet& net) {
  AdamState state;
  state.step = 0;
  for (const DenseLayer& l : net.layers) {
    DenseLayer zero;
    zero.weights = Grid(l.weights.rows(), l.weights.cols());
    zero.bias.assign(l.bias.size(), 0.0);
    state.m.push_back(zero);
    state.v.push_back(zero);
  }
  return state;
}

void TrainConfig::validate() const {
  if (epochs < 0) throw ValueError("epochs must be nonnegative");
  if (batch_size < 1) throw ValueError("batch size must be positive");
  if (learning_rate < 0.0) throw ValueError("learning rate must be >= 0");
  if (adam_eps <= 0.0) throw ValueError("adam eps must be positive");
  loss_params.validate();
}

void adam_step(MaskNet& net, const NetGradients& grads, AdamState& state,
               const TrainConfig& config) {
  if (grads.layers.size() != net.layers.size()) {
    throw ShapeError("gradient layer count mismatch");
  }
  state.step += 1;
  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(state.step));

  const auto update = [&](double& p, double& m, double& v, double g) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    const double mhat = m / bias1;
    const double vhat = v / bias2;
    p -= config.learning_rate * mhat / (std::sqrt(vhat) + config.adam_eps);
  };

  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    DenseLayer& layer = net.layers[li];
    const DenseLayer& g = grads.layers[li];
    DenseLayer& m = state.m[li];
    DenseLayer& v = state.v[li];
    for (std::size_t i = 0; i < layer.weights.size(); ++i) {
      update(layer.weights[i], m.weights[i], v.weights[i], g.weights[i]);
    }
    for (std::size_t i = 0; i < layer.bias.size(); ++i) {
      update(layer.bias[i], m.bias[i], v.bias[i], g.bias[i]);
    }
  }
}

TrainExample make_train_example(const std::string& id, const Waveform& noisy,
                                const Waveform& clean, const Waveform& noise,
                                const StftConfig& config) {
  if (noisy.samples.size() != clean.samples.size() ||
      noisy.samples.size() != noise.samples.size()) {
    throw ShapeError("utterance component lengths differ");
  }
  TrainExample ex;
  ex.id = id;
  ex.noisy_spec = stft(noisy, config);
  ex.noisy_mag = magnitude(ex.noisy_spec);
  ex.clean_mag = magnitude(stft(clean, config));
  ex.noise_mag = magnitude(stft(noise, config));
  ex.clean_padded = clean;
  ex.clean_padded.samples.resize(
      synthesis_length(config, ex.noisy_spec.frames()), 0.0);
  return ex;
}

LossResult evaluate_loss(LossKind kind, const LossParams& params,
                         const TrainExample& example, const GainMask& mask) {
  switch (kind) {
    case LossKind::kGeneralized:
      return loss_generalized(example.clean_mag, example.noise_mag, mask,
                              params);
    case LossKind::kComponents:
      return loss_components(example.clean_mag, example.noise_mag, mask,
                             params.mu);
    case LossKind::kMseMagnitude:
      return loss_mse_magnitude(example.clean_mag, example.noisy_mag, mask);
    case LossKind::kTimeMse:
      return loss_time_mse(example.clean_padded, example.noisy_spec, mask);
    case LossKind::kSiSdr:
      return loss_si_sdr(example.clean_padded, example.noisy_spec, mask);
  }
  throw ValueError("unknown loss kind");
}

namespace {

void accumulate(NetGradients& total, const NetGradients& part) {
  if (total.layers.empty()) {
    total = part;
    return;
  }
  for (std::size_t li = 0; li < total.layers.size(); ++li) {
    for (std::size_t i = 0; i < total.layers[li].weights.size(); ++i) {
      total.layers[li].weights[i] += part.layers[li].weights[i];
    }
    for (std::size_t i = 0; i < total.layers[li].bias.size(); ++i) {
      total.layers[li].bias[i] += part.layers[li].bias[i];
    }
  }
}

void scale(NetGradients& grads, double s) {
  for (DenseLayer& l : grads.layers) {
    for (std::size_t i = 0; i < l.weights.size(); ++i) l.weights[i] *= s;
    for (double& b : l.bias) b *= s;
  }
}

}  // namespace

std::vector<double> train(MaskNet& net,
                          const std::vector<TrainExample>& dataset,
                          const TrainConfig& config) {
  config.validate();
  if (dataset.empty()) throw ValueError("empty training dataset");

  AdamState state = make_adam_state(net);
  std::vector<double> history;
  history.reserve(config.epochs);
  std::vector<double> utt_loss(dataset.size(), 0.0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(config.seed + 0x9e3779b97f4a7c15ull *
                                      static_cast<std::uint64_t>(epoch + 1));
    shuffle(order, shuffle_rng);

    NetGradients batch;
    int in_batch = 0;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
      const TrainExample& ex = dataset[order[oi]];
      const Grid feats = features(ex.noisy_mag, net.context);
      ForwardCache cache;
      const GainMask mask = forward(net, feats, &cache);
      const LossResult loss =
          evaluate_loss(config.loss, config.loss_params, ex, mask);
      utt_loss[order[oi]] = loss.value;
      accumulate(batch, backward(net, cache, loss.grad_mask));
      ++in_batch;
      const bool flush = in_batch == config.batch_size || oi + 1 == order.size();
      if (flush) {
        if (in_batch > 1) scale(batch, 1.0 / in_batch);
        adam_step(net, batch, state, config);
        batch = NetGradients{};
        in_batch = 0;
      }
    }
    // Mean in dataset order, so the history does not depend on the shuffle.
    double mean = 0.0;
    for (double v : utt_loss) mean += v;
    history.push_back(mean / static_cast<double>(dataset.size()));
  }
  return history;
}

namespace {

constexpr char kCheckpointMagic[8] = {'R', 'N', 'S', 'E',
                                      'C', 'K', 'P', 'T'};
constexpr std::uint32_t kCheckpointVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 4);
}

void put_f64(std::ofstream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char buf[8];
  for (int i = 0; i < 8; ++i) {
    buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  out.write(buf, 8);
}

std::uint32_t get_u32(std::ifstream& in) {
  char buf[4];
  in.read(buf, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i]))
         << (8 * i);
  }
  return v;
}

double get_f64(std::ifstream& in) {
  char buf[8];
  in.read(buf, 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i]))
            << (8 * i);
  }
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path,
                     const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create checkpoint " + path.string());
  out.write(kCheckpointMagic, 8);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(ckpt.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(ckpt.stft.frame_len));
  put_u32(out, static_cast<std::uint32_t>(ckpt.stft.hop));
  put_u32(out, static_cast<std::uint32_t>(ckpt.stft.fft_len));
  put_u32(out, ckpt.stft.window == Window::kHann ? 0 : 1);
  put_u32(out, static_cast<std::uint32_t>(ckpt.net.context));
  put_u32(out, static_cast<std::uint32_t>(ckpt.net.bins));
  put_u32(out, ckpt.net.activation == Activation::kElu ? 0 : 1);
  put_u32(out, static_cast<std::uint32_t>(ckpt.net.layers.size()));
  for (const DenseLayer& l : ckpt.net.layers) {
    put_u32(out, static_cast<std::uint32_t>(l.weights.rows()));
    put_u32(out, static_cast<std::uint32_t>(l.weights.cols()));
    for (std::size_t i = 0; i < l.weights.size(); ++i) {
      put_f64(out, l.weights[i]);
    }
    for (double b : l.bias) put_f64(out, b);
  }
  if (!out) throw IoError("write failure on checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0) {
    throw FormatError("not a checkpoint file: " + path.string());
  }
  if (get_u32(in) != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version");
  }
  Checkpoint ckpt;
  ckpt.sample_rate = static_cast<int>(get_u32(in));
  ckpt.stft.frame_len = static_cast<int>(get_u32(in));
  ckpt.stft.hop = static_cast<int>(get_u32(in));
  ckpt.stft.fft_len = static_cast<int>(get_u32(in));
  ckpt.stft.window = get_u32(in) == 0 ? Window::kHann : Window::kSqrtHann;
  ckpt.net.context = static_cast<int>(get_u32(in));
  ckpt.net.bins = static_cast<int>(get_u32(in));
  ckpt.net.activation = get_u32(in) == 0 ? Activation::kElu : Activation::kRelu;
  const std::uint32_t n_layers = get_u32(in);
  for (std::uint32_t li = 0; li < n_layers; ++li) {
    DenseLayer layer;
    const std::uint32_t rows = get_u32(in);
    const std::uint32_t cols = get_u32(in);
    layer.weights = Grid(rows, cols);
    for (std::size_t i = 0; i < layer.weights.size(); ++i) {
      layer.weights[i] = get_f64(in);
    }
    layer.bias.resize(rows);
    for (std::uint32_t i = 0; i < rows; ++i) layer.bias[i] = get_f64(in);
    ckpt.net.layers.push_back(std::move(layer));
  }
  if (!in) throw FormatError("truncated checkpoint " + path.string());
  return ckpt;
}

}  // namespace rnse
