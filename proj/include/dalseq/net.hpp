#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dalseq/encode.hpp"
#include "dalseq/rng.hpp"
#include "dalseq/types.hpp"

namespace dalseq {

// Hyperparameters of the six-layer stack: embedding, LSTM, max pooling over
// non-pad timesteps, dropout, dense+ReLU, dense+sigmoid. All math is double
// precision.
struct ModelConfig {
  size_t seq_len = 15;                          // L
  size_t vocab_size = 30000;                    // V
  size_t embedding_dim = 64;                    // E
  size_t hidden_size = 64;                      // H
  size_t dense_size = 64;                       // D1
  double dropout_rate = 0.2;
  size_t batch_size = 128;
  double learning_rate = 0.001000000474974513;  // float32 1e-3, kept verbatim
  size_t epochs = 5;
  uint64_t seed = 1;
  bool mean_pooling = false;  // max pooling unless set

  void validate() const;  // throws Error(Usage) on nonsensical values
};

// Gate block order inside the stacked LSTM matrices: input, forget, cell
// candidate, output; rows [g*H, (g+1)*H).
enum GateIndex { kGateInput = 0, kGateForget = 1, kGateCell = 2, kGateOutput = 3 };

struct ModelParams {
  Eigen::MatrixXd embedding;  // V x E
  Eigen::MatrixXd lstm_w;     // 4H x E
  Eigen::MatrixXd lstm_u;     // 4H x H
  Eigen::VectorXd lstm_b;     // 4H
  Eigen::MatrixXd dense1_w;   // D1 x H
  Eigen::VectorXd dense1_b;   // D1
  Eigen::VectorXd dense2_w;   // D1
  double dense2_b = 0.0;

  static ModelParams zeros(const ModelConfig& config);
};

// Applies fn(name, rows, cols, data) to every parameter array in a fixed
// order. dense2_b is exposed as a 1x1 array. Used by Adam, the checkpoint
// writer and the gradient checker.
template <typename P, typename F>
void for_each_param(P& params, F&& fn) {
  fn("embedding", params.embedding.rows(), params.embedding.cols(),
     params.embedding.data());
  fn("lstm_w", params.lstm_w.rows(), params.lstm_w.cols(),
     params.lstm_w.data());
  fn("lstm_u", params.lstm_u.rows(), params.lstm_u.cols(),
     params.lstm_u.data());
  fn("lstm_b", params.lstm_b.rows(), Eigen::Index(1), params.lstm_b.data());
  fn("dense1_w", params.dense1_w.rows(), params.dense1_w.cols(),
     params.dense1_w.data());
  fn("dense1_b", params.dense1_b.rows(), Eigen::Index(1),
     params.dense1_b.data());
  fn("dense2_w", params.dense2_w.rows(), Eigen::Index(1),
     params.dense2_w.data());
  fn("dense2_b", Eigen::Index(1), Eigen::Index(1), &params.dense2_b);
}

// Glorot-uniform weights (per-block bound sqrt(6/(fan_in+fan_out))), zero
// biases except the LSTM forget-gate block at 1.0. Deterministic in seed.
ModelParams init_params(const ModelConfig& config, uint64_t seed);

// Single LSTM cell step; the batched forward uses the same arithmetic.
void lstm_step(const ModelParams& params, const Eigen::VectorXd& x_t,
               const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev,
               Eigen::VectorXd& h_t, Eigen::VectorXd& c_t);

// Everything backward needs, kept per batch. Timestep buffers are sized to
// the longest non-pad prefix in the batch, not to L.
struct ForwardCache {
  size_t batch = 0;
  size_t t_max = 0;                     // longest non-pad prefix
  std::vector<size_t> t_eff;            // per-row non-pad length
  std::vector<const EncodedSequence*> rows;
  std::vector<Eigen::MatrixXd> gate_i, gate_f, gate_g, gate_o;  // B x H per t
  std::vector<Eigen::MatrixXd> cell;                            // B x H per t
  std::vector<Eigen::MatrixXd> hidden;                          // B x H per t
  Eigen::MatrixXd pooled;          // B x H
  std::vector<std::vector<Eigen::Index>> pool_argmax;  // [H] per row
  Eigen::MatrixXd dropout_mask;    // B x H; ones in eval mode
  Eigen::MatrixXd dropped;         // B x H
  Eigen::MatrixXd z1;              // B x D1 pre-activation
  Eigen::MatrixXd relu1;           // B x D1
  Eigen::VectorXd logits;          // B
  Eigen::VectorXd probs;           // B
  bool train_mode = false;
};

// Probabilities for a batch. In train mode, inverted dropout on the pooled
// vector draws its mask from rng (pass by value to replay a mask). Throws
// Error(IdOutOfRange) if any id >= V.
Eigen::VectorXd forward(const ModelParams& params, const ModelConfig& config,
                        std::span<const EncodedSequence* const> batch,
                        bool train_mode, CounterRng rng, ForwardCache* cache);

// Convenience overload building the pointer span.
Eigen::VectorXd forward(const ModelParams& params, const ModelConfig& config,
                        const std::vector<EncodedSequence>& batch,
                        bool train_mode, CounterRng rng,
                        ForwardCache* cache = nullptr);

// Mean binary cross-entropy with probabilities clamped to
// [1e-7, 1 - 1e-7].
double bce_loss(const Eigen::VectorXd& probs, const std::vector<int>& labels);

// Exact reverse-mode gradients of bce_loss through the whole stack,
// including pooling argmax routing and the dropout mask held in cache.
ModelParams backward(const ModelParams& params, const ModelConfig& config,
                     const ForwardCache& cache, const std::vector<int>& labels);

struct AdamState {
  ModelParams m;
  ModelParams v;
  uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState zeros(const ModelConfig& config);
};

// Standard bias-corrected Adam step; increments state.t.
void adam_update(ModelParams& params, const ModelParams& grads,
                 AdamState& state, double lr);

// Checkpoint: "DSQM", version byte, the config, then each array as
// (name, rows, cols, row-major doubles). Round-trips bitwise.
void save_checkpoint(const ModelConfig& config, const ModelParams& params,
                     const std::filesystem::path& path);
void load_checkpoint(const std::filesystem::path& path, ModelConfig& config,
                     ModelParams& params);

}  // namespace dalseq
