#include "dalseq/net.hpp"

#include <cmath>

namespace dalseq {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Eigen::MatrixXd sigmoid_mat(const Eigen::MatrixXd& a) {
  return a.unaryExpr([](double x) { return sigmoid(x); });
}

// Leading non-pad length; a pad id terminates the sequence.
size_t non_pad_prefix(const std::vector<int32_t>& ids) {
  size_t n = 0;
  while (n < ids.size() && ids[n] != kPadId) ++n;
  return n;
}

}  // namespace

void ModelConfig::validate() const {
  if (seq_len < 1 || embedding_dim < 1 || hidden_size < 1 || dense_size < 1) {
    throw Error(ErrorKind::Usage, "model dimensions must be >= 1");
  }
  if (vocab_size < 2) {
    throw Error(ErrorKind::Usage, "vocab_size must cover PAD and OOV");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw Error(ErrorKind::Usage, "dropout_rate must be in [0, 1)");
  }
  if (batch_size < 1) {
    throw Error(ErrorKind::Usage, "batch_size must be >= 1");
  }
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorKind::Usage, "learning_rate must be positive");
  }
}

ModelParams ModelParams::zeros(const ModelConfig& c) {
  ModelParams p;
  Eigen::Index v = Eigen::Index(c.vocab_size), e = Eigen::Index(c.embedding_dim);
  Eigen::Index h = Eigen::Index(c.hidden_size), d = Eigen::Index(c.dense_size);
  p.embedding = Eigen::MatrixXd::Zero(v, e);
  p.lstm_w = Eigen::MatrixXd::Zero(4 * h, e);
  p.lstm_u = Eigen::MatrixXd::Zero(4 * h, h);
  p.lstm_b = Eigen::VectorXd::Zero(4 * h);
  p.dense1_w = Eigen::MatrixXd::Zero(d, h);
  p.dense1_b = Eigen::VectorXd::Zero(d);
  p.dense2_w = Eigen::VectorXd::Zero(d);
  p.dense2_b = 0.0;
  return p;
}

ModelParams init_params(const ModelConfig& config, uint64_t seed) {
  config.validate();
  ModelParams p = ModelParams::zeros(config);
  CounterRng rng(seed, kStreamInit);

  // Row-major fill order makes the draw sequence independent of Eigen's
  // storage layout.
  auto fill_uniform = [&rng](auto& m, double bound) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = rng.uniform(-bound, bound);
      }
    }
  };

  double v = double(config.vocab_size), e = double(config.embedding_dim);
  double h = double(config.hidden_size), d = double(config.dense_size);

  fill_uniform(p.embedding, std::sqrt(6.0 / (v + e)));
  fill_uniform(p.lstm_w, std::sqrt(6.0 / (e + h)));
  fill_uniform(p.lstm_u, std::sqrt(6.0 / (h + h)));
  fill_uniform(p.dense1_w, std::sqrt(6.0 / (h + d)));
  fill_uniform(p.dense2_w, std::sqrt(6.0 / (d + 1.0)));

  // Biases stay zero except the forget gate, opened at init.
  p.lstm_b.segment(kGateForget * Eigen::Index(config.hidden_size),
                   Eigen::Index(config.hidden_size))
      .setOnes();
  return p;
}

void lstm_step(const ModelParams& params, const Eigen::VectorXd& x_t,
               const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev,
               Eigen::VectorXd& h_t, Eigen::VectorXd& c_t) {
  const Eigen::Index h = h_prev.size();
  Eigen::VectorXd a = params.lstm_w * x_t + params.lstm_u * h_prev + params.lstm_b;
  Eigen::VectorXd gi = a.segment(kGateInput * h, h).unaryExpr(
      [](double z) { return sigmoid(z); });
  Eigen::VectorXd gf = a.segment(kGateForget * h, h).unaryExpr(
      [](double z) { return sigmoid(z); });
  Eigen::VectorXd gg = a.segment(kGateCell * h, h).array().tanh();
  Eigen::VectorXd go = a.segment(kGateOutput * h, h).unaryExpr(
      [](double z) { return sigmoid(z); });
  c_t = gf.cwiseProduct(c_prev) + gi.cwiseProduct(gg);
  h_t = go.cwiseProduct(c_t.array().tanh().matrix());
}

Eigen::VectorXd forward(const ModelParams& params, const ModelConfig& config,
                        std::span<const EncodedSequence* const> batch,
                        bool train_mode, CounterRng rng, ForwardCache* cache) {
  if (batch.empty()) {
    throw Error(ErrorKind::EmptyTrainingSet, "forward on an empty batch");
  }
  const Eigen::Index b_n = Eigen::Index(batch.size());
  const Eigen::Index h_n = Eigen::Index(config.hidden_size);
  const Eigen::Index e_n = Eigen::Index(config.embedding_dim);
  const int32_t v_n = int32_t(config.vocab_size);

  ForwardCache local;
  ForwardCache& cc = cache ? *cache : local;
  cc = ForwardCache{};
  cc.batch = size_t(b_n);
  cc.train_mode = train_mode;
  cc.rows.assign(batch.begin(), batch.end());
  cc.t_eff.resize(size_t(b_n));
  size_t t_max = 0;
  for (Eigen::Index b = 0; b < b_n; ++b) {
    const auto& ids = batch[size_t(b)]->ids;
    for (int32_t id : ids) {
      if (id < 0 || id >= v_n) {
        throw Error(ErrorKind::IdOutOfRange,
                    "token id " + std::to_string(id) + " outside vocabulary of " +
                        std::to_string(v_n));
      }
    }
    cc.t_eff[size_t(b)] = non_pad_prefix(ids);
    t_max = std::max(t_max, cc.t_eff[size_t(b)]);
  }
  cc.t_max = t_max;

  cc.gate_i.resize(t_max);
  cc.gate_f.resize(t_max);
  cc.gate_g.resize(t_max);
  cc.gate_o.resize(t_max);
  cc.cell.resize(t_max);
  cc.hidden.resize(t_max);

  const Eigen::MatrixXd zero_state = Eigen::MatrixXd::Zero(b_n, h_n);
  Eigen::MatrixXd x_t(b_n, e_n);
  for (size_t t = 0; t < t_max; ++t) {
    const Eigen::MatrixXd& h_prev = t > 0 ? cc.hidden[t - 1] : zero_state;
    const Eigen::MatrixXd& c_prev = t > 0 ? cc.cell[t - 1] : zero_state;
    x_t.setZero();
    for (Eigen::Index b = 0; b < b_n; ++b) {
      if (t < cc.t_eff[size_t(b)]) {
        x_t.row(b) = params.embedding.row(batch[size_t(b)]->ids[t]);
      }
    }
    Eigen::MatrixXd a = x_t * params.lstm_w.transpose() +
                        h_prev * params.lstm_u.transpose();
    a.rowwise() += params.lstm_b.transpose();

    cc.gate_i[t] = sigmoid_mat(a.middleCols(kGateInput * h_n, h_n));
    cc.gate_f[t] = sigmoid_mat(a.middleCols(kGateForget * h_n, h_n));
    cc.gate_g[t] = a.middleCols(kGateCell * h_n, h_n).array().tanh().matrix();
    cc.gate_o[t] = sigmoid_mat(a.middleCols(kGateOutput * h_n, h_n));
    cc.cell[t] = cc.gate_f[t].cwiseProduct(c_prev) +
                 cc.gate_i[t].cwiseProduct(cc.gate_g[t]);
    cc.hidden[t] = cc.gate_o[t].cwiseProduct(cc.cell[t].array().tanh().matrix());
  }

  // Pool over non-pad timesteps; an all-pad row pools to zero.
  cc.pooled = Eigen::MatrixXd::Zero(b_n, h_n);
  if (config.mean_pooling) {
    for (Eigen::Index b = 0; b < b_n; ++b) {
      size_t n = cc.t_eff[size_t(b)];
      for (size_t t = 0; t < n; ++t) cc.pooled.row(b) += cc.hidden[t].row(b);
      if (n > 0) cc.pooled.row(b) /= double(n);
    }
  } else {
    cc.pool_argmax.assign(size_t(b_n), std::vector<Eigen::Index>(size_t(h_n), -1));
    for (Eigen::Index b = 0; b < b_n; ++b) {
      size_t n = cc.t_eff[size_t(b)];
      if (n == 0) continue;
      for (Eigen::Index j = 0; j < h_n; ++j) {
        double best = cc.hidden[0](b, j);
        Eigen::Index best_t = 0;
        for (size_t t = 1; t < n; ++t) {
          if (cc.hidden[t](b, j) > best) {
            best = cc.hidden[t](b, j);
            best_t = Eigen::Index(t);
          }
        }
        cc.pooled(b, j) = best;
        cc.pool_argmax[size_t(b)][size_t(j)] = best_t;
      }
    }
  }

  // Inverted dropout on the pooled vector, train mode only. Mask draws are
  // row-major so a copied rng replays the same mask.
  cc.dropout_mask = Eigen::MatrixXd::Ones(b_n, h_n);
  if (train_mode && config.dropout_rate > 0.0) {
    const double keep = 1.0 - config.dropout_rate;
    for (Eigen::Index b = 0; b < b_n; ++b) {
      for (Eigen::Index j = 0; j < h_n; ++j) {
        cc.dropout_mask(b, j) = rng.next_unit() < keep ? 1.0 / keep : 0.0;
      }
    }
  }
  cc.dropped = cc.pooled.cwiseProduct(cc.dropout_mask);

  cc.z1 = cc.dropped * params.dense1_w.transpose();
  cc.z1.rowwise() += params.dense1_b.transpose();
  cc.relu1 = cc.z1.cwiseMax(0.0);
  cc.logits = cc.relu1 * params.dense2_w;
  cc.logits.array() += params.dense2_b;
  cc.probs = cc.logits.unaryExpr([](double z) { return sigmoid(z); });
  return cc.probs;
}

Eigen::VectorXd forward(const ModelParams& params, const ModelConfig& config,
                        const std::vector<EncodedSequence>& batch,
                        bool train_mode, CounterRng rng, ForwardCache* cache) {
  std::vector<const EncodedSequence*> ptrs;
  ptrs.reserve(batch.size());
  for (const auto& row : batch) ptrs.push_back(&row);
  return forward(params, config,
                 std::span<const EncodedSequence* const>(ptrs), train_mode,
                 rng, cache);
}

double bce_loss(const Eigen::VectorXd& probs, const std::vector<int>& labels) {
  const double lo = 1e-7, hi = 1.0 - 1e-7;
  double total = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    double p = std::clamp(probs[i], lo, hi);
    double y = double(labels[size_t(i)]);
    total += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
  }
  return total / double(probs.size());
}

ModelParams backward(const ModelParams& params, const ModelConfig& config,
                     const ForwardCache& cache, const std::vector<int>& labels) {
  const Eigen::Index b_n = Eigen::Index(cache.batch);
  const Eigen::Index h_n = Eigen::Index(config.hidden_size);
  const Eigen::Index e_n = Eigen::Index(config.embedding_dim);
  const double lo = 1e-7, hi = 1.0 - 1e-7;

  ModelParams g = ModelParams::zeros(config);

  // Head: mean BCE + sigmoid collapse to (p - y) / B; a clamped probability
  // contributes no gradient.
  Eigen::VectorXd dlogit(b_n);
  for (Eigen::Index b = 0; b < b_n; ++b) {
    double p = cache.probs[b];
    if (p < lo || p > hi) {
      dlogit[b] = 0.0;
    } else {
      dlogit[b] = (p - double(labels[size_t(b)])) / double(b_n);
    }
  }

  g.dense2_w = cache.relu1.transpose() * dlogit;
  g.dense2_b = dlogit.sum();

  Eigen::MatrixXd d_relu = dlogit * params.dense2_w.transpose();  // B x D1
  Eigen::MatrixXd d_z1 =
      d_relu.cwiseProduct((cache.z1.array() > 0.0).cast<double>().matrix());
  g.dense1_w = d_z1.transpose() * cache.dropped;
  g.dense1_b = d_z1.colwise().sum().transpose();
  Eigen::MatrixXd d_dropped = d_z1 * params.dense1_w;  // B x H
  Eigen::MatrixXd d_pool = d_dropped.cwiseProduct(cache.dropout_mask);

  // Route pooled gradients back to their source timesteps.
  std::vector<Eigen::MatrixXd> d_hidden(cache.t_max,
                                        Eigen::MatrixXd::Zero(b_n, h_n));
  if (config.mean_pooling) {
    for (Eigen::Index b = 0; b < b_n; ++b) {
      size_t n = cache.t_eff[size_t(b)];
      for (size_t t = 0; t < n; ++t) {
        d_hidden[t].row(b) += d_pool.row(b) / double(n);
      }
    }
  } else {
    for (Eigen::Index b = 0; b < b_n; ++b) {
      for (Eigen::Index j = 0; j < h_n; ++j) {
        Eigen::Index t = cache.pool_argmax[size_t(b)][size_t(j)];
        if (t >= 0) d_hidden[size_t(t)](b, j) += d_pool(b, j);
      }
    }
  }

  const Eigen::MatrixXd zero_state = Eigen::MatrixXd::Zero(b_n, h_n);
  Eigen::MatrixXd dh_next = Eigen::MatrixXd::Zero(b_n, h_n);
  Eigen::MatrixXd dc_next = Eigen::MatrixXd::Zero(b_n, h_n);
  Eigen::MatrixXd x_t(b_n, e_n);
  for (size_t ts = cache.t_max; ts-- > 0;) {
    const Eigen::MatrixXd& gi = cache.gate_i[ts];
    const Eigen::MatrixXd& gf = cache.gate_f[ts];
    const Eigen::MatrixXd& gg = cache.gate_g[ts];
    const Eigen::MatrixXd& go = cache.gate_o[ts];
    const Eigen::MatrixXd& ct = cache.cell[ts];
    Eigen::MatrixXd tc = ct.array().tanh().matrix();

    Eigen::MatrixXd dh = d_hidden[ts] + dh_next;
    Eigen::MatrixXd dc = dc_next +
        dh.cwiseProduct(go).cwiseProduct(
            (1.0 - tc.array().square()).matrix());

    const Eigen::MatrixXd& c_prev = ts > 0 ? cache.cell[ts - 1] : zero_state;
    const Eigen::MatrixXd& h_prev = ts > 0 ? cache.hidden[ts - 1] : zero_state;

    Eigen::MatrixXd da(b_n, 4 * h_n);
    da.middleCols(kGateInput * h_n, h_n) =
        dc.cwiseProduct(gg).cwiseProduct(gi).cwiseProduct(
            (1.0 - gi.array()).matrix());
    da.middleCols(kGateForget * h_n, h_n) =
        dc.cwiseProduct(c_prev).cwiseProduct(gf).cwiseProduct(
            (1.0 - gf.array()).matrix());
    da.middleCols(kGateCell * h_n, h_n) =
        dc.cwiseProduct(gi).cwiseProduct((1.0 - gg.array().square()).matrix());
    da.middleCols(kGateOutput * h_n, h_n) =
        dh.cwiseProduct(tc).cwiseProduct(go).cwiseProduct(
            (1.0 - go.array()).matrix());

    x_t.setZero();
    for (Eigen::Index b = 0; b < b_n; ++b) {
      if (ts < cache.t_eff[size_t(b)]) {
        x_t.row(b) = params.embedding.row(cache.rows[size_t(b)]->ids[ts]);
      }
    }

    g.lstm_w += da.transpose() * x_t;
    g.lstm_u += da.transpose() * h_prev;
    g.lstm_b += da.colwise().sum().transpose();

    Eigen::MatrixXd dx = da * params.lstm_w;  // B x E
    for (Eigen::Index b = 0; b < b_n; ++b) {
      if (ts < cache.t_eff[size_t(b)]) {
        g.embedding.row(cache.rows[size_t(b)]->ids[ts]) += dx.row(b);
      }
    }

    dh_next = da * params.lstm_u;
    dc_next = dc.cwiseProduct(gf);
  }

  return g;
}

AdamState AdamState::zeros(const ModelConfig& config) {
  AdamState s;
  s.m = ModelParams::zeros(config);
  s.v = ModelParams::zeros(config);
  return s;
}

namespace {

struct ParamView {
  const char* name;
  Eigen::Index rows, cols;
  double* data;
};

template <typename P>
std::vector<ParamView> param_views(P& params) {
  std::vector<ParamView> views;
  for_each_param(params, [&](const char* name, Eigen::Index r, Eigen::Index c,
                             double* d) {
    views.push_back({name, r, c, d});
  });
  return views;
}

}  // namespace

void adam_update(ModelParams& params, const ModelParams& grads,
                 AdamState& state, double lr) {
  state.t += 1;
  const double b1 = state.beta1, b2 = state.beta2;
  const double corr1 = 1.0 - std::pow(b1, double(state.t));
  const double corr2 = 1.0 - std::pow(b2, double(state.t));

  auto pv = param_views(params);
  auto gv = param_views(const_cast<ModelParams&>(grads));
  auto mv = param_views(state.m);
  auto vv = param_views(state.v);
  for (size_t k = 0; k < pv.size(); ++k) {
    const Eigen::Index n = pv[k].rows * pv[k].cols;
    double* p = pv[k].data;
    const double* gr = gv[k].data;
    double* m = mv[k].data;
    double* v = vv[k].data;
    for (Eigen::Index i = 0; i < n; ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * gr[i];
      v[i] = b2 * v[i] + (1.0 - b2) * gr[i] * gr[i];
      double m_hat = m[i] / corr1;
      double v_hat = v[i] / corr2;
      p[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
  }
}

}  // namespace dalseq
