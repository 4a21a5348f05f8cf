#include "dalseq/harness.hpp"

#include <algorithm>
#include <cmath>

#include "dalseq/rng.hpp"
#include "dalseq/segment.hpp"

namespace dalseq {

Metrics metrics_from(const ContingencyTable& t) {
  if (t.total() == 0) {
    throw Error(ErrorKind::EmptyTable, "metrics of an empty table");
  }
  Metrics m;
  uint64_t pos = t.tp + t.fn;
  uint64_t neg = t.fp + t.tn;
  m.tpr = pos == 0 ? 0.0 : double(t.tp) / double(pos);
  m.fpr = neg == 0 ? 0.0 : double(t.fp) / double(neg);
  m.acc = double(t.tp + t.tn) / double(t.total());
  return m;
}

AppSplit split_by_app(const DatasetManifest& manifest, double train_fraction,
                      uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::Usage, "train_fraction must be in (0, 1)");
  }
  std::vector<std::string> benign, malicious;
  for (const auto& e : manifest.entries) {
    (e.label == Label::Benign ? benign : malicious).push_back(e.app_id);
  }

  AppSplit split;
  CounterRng rng(seed, kStreamSplit);
  for (auto* group : {&benign, &malicious}) {
    // Canonical order before the seeded shuffle, so the outcome does not
    // depend on manifest entry order.
    std::sort(group->begin(), group->end());
    deterministic_shuffle(*group, rng);
    size_t n = group->size();
    size_t n_train = size_t(std::llround(double(n) * train_fraction));
    if (n_train == 0 || n_train >= n) {
      throw Error(ErrorKind::TooFewApps,
                  "a label class with " + std::to_string(n) +
                      " apps cannot be split " + std::to_string(train_fraction));
    }
    for (size_t i = 0; i < n; ++i) {
      (i < n_train ? split.train_ids : split.test_ids).push_back((*group)[i]);
    }
  }
  std::sort(split.train_ids.begin(), split.train_ids.end());
  std::sort(split.test_ids.begin(), split.test_ids.end());
  return split;
}

TrainResult train(const ModelConfig& config,
                  const std::vector<EncodedSequence>& train_set, size_t cap) {
  config.validate();
  if (train_set.empty()) {
    throw Error(ErrorKind::EmptyTrainingSet, "no training sequences");
  }

  TrainResult result;
  result.params = init_params(config, config.seed);
  AdamState state = AdamState::zeros(config);

  std::vector<size_t> order(train_set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    CounterRng shuffle_rng(config.seed,
                           CounterRng::mix(kStreamShuffle) + epoch);
    deterministic_shuffle(order, shuffle_rng);
    size_t n = order.size();
    if (cap > 0) n = std::min(n, cap);

    double loss_sum = 0.0;
    size_t consumed = 0;
    for (size_t start = 0; start < n; start += config.batch_size) {
      size_t end = std::min(n, start + config.batch_size);
      std::vector<const EncodedSequence*> batch;
      std::vector<int> labels;
      batch.reserve(end - start);
      for (size_t i = start; i < end; ++i) {
        batch.push_back(&train_set[order[i]]);
        labels.push_back(train_set[order[i]].label);
      }
      // Disjoint dropout stream per (epoch, batch).
      CounterRng dropout_rng(
          config.seed,
          CounterRng::mix(kStreamDropout) + epoch * 0x10000 + start);
      ForwardCache cache;
      Eigen::VectorXd probs =
          forward(result.params, config,
                  std::span<const EncodedSequence* const>(batch), true,
                  dropout_rng, &cache);
      double loss = bce_loss(probs, labels);
      ModelParams grads = backward(result.params, config, cache, labels);
      adam_update(result.params, grads, state, config.learning_rate);

      loss_sum += loss * double(batch.size());
      consumed += batch.size();
    }
    result.epoch_losses.push_back(consumed ? loss_sum / double(consumed) : 0.0);
    result.consumed_per_epoch.push_back(consumed);
  }
  return result;
}

std::vector<double> predict_probs(const ModelParams& params,
                                  const ModelConfig& config,
                                  const std::vector<EncodedSequence>& rows) {
  std::vector<double> probs;
  probs.reserve(rows.size());
  CounterRng unused(0, 0);
  for (size_t start = 0; start < rows.size(); start += config.batch_size) {
    size_t end = std::min(rows.size(), start + config.batch_size);
    std::vector<const EncodedSequence*> batch;
    for (size_t i = start; i < end; ++i) batch.push_back(&rows[i]);
    Eigen::VectorXd p =
        forward(params, config, std::span<const EncodedSequence* const>(batch),
                false, unused, nullptr);
    for (Eigen::Index i = 0; i < p.size(); ++i) probs.push_back(p[i]);
  }
  return probs;
}

ContingencyTable evaluate(const ModelParams& params, const ModelConfig& config,
                          const std::vector<EncodedSequence>& test_set,
                          double threshold) {
  std::vector<double> probs = predict_probs(params, config, test_set);
  ContingencyTable table;
  for (size_t i = 0; i < test_set.size(); ++i) {
    bool predicted = probs[i] >= threshold;
    bool actual = test_set[i].label == 1;
    if (predicted && actual) ++table.tp;
    if (predicted && !actual) ++table.fp;
    if (!predicted && !actual) ++table.tn;
    if (!predicted && actual) ++table.fn;
  }
  return table;
}

ContingencyTable aggregate_app(const std::vector<EncodedSequence>& rows,
                               const std::vector<double>& probs,
                               double threshold, AppAggregation mode) {
  struct AppAcc {
    double prob_sum = 0.0;
    size_t n = 0;
    size_t voted_malicious = 0;
    int label = 0;
  };
  std::map<std::string, AppAcc> apps;
  for (size_t i = 0; i < rows.size(); ++i) {
    AppAcc& acc = apps[rows[i].app_id];
    acc.prob_sum += probs[i];
    acc.n += 1;
    if (probs[i] >= threshold) ++acc.voted_malicious;
    acc.label = rows[i].label;
  }
  ContingencyTable table;
  for (const auto& [id, acc] : apps) {
    bool predicted;
    if (mode == AppAggregation::MeanProb) {
      predicted = acc.prob_sum / double(acc.n) >= threshold;
    } else {
      predicted = 2 * acc.voted_malicious >= acc.n;
    }
    bool actual = acc.label == 1;
    if (predicted && actual) ++table.tp;
    if (predicted && !actual) ++table.fp;
    if (!predicted && !actual) ++table.tn;
    if (!predicted && actual) ++table.fn;
  }
  return table;
}

CorpusStats corpus_stats(const std::vector<RawDocument>& docs,
                         const std::vector<SequenceUnit>& units) {
  CorpusStats stats;
  for (const auto& d : docs) {
    (d.label == Label::Benign ? stats.files_benign : stats.files_malicious)++;
  }
  stats.n_sequences = units.size();
  if (!units.empty()) {
    uint64_t tokens = 0, lines = 0;
    for (const auto& u : units) {
      tokens += tokenize(u).size();
      lines += u.lines.size();
    }
    stats.mean_tokens_per_sequence = double(tokens) / double(units.size());
    stats.mean_lines_per_unit = double(lines) / double(units.size());
  }
  return stats;
}

}  // namespace dalseq
