#include "dalseq/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

namespace dalseq {

std::string split_digest(const AppSplit& split) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= '|';
    h *= 0x100000001b3ULL;
  };
  mix("train");
  for (const auto& id : split.train_ids) mix(id);
  mix("test");
  for (const auto& id : split.test_ids) mix(id);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

PipelineResult run_pipeline(const std::vector<RawDocument>& docs,
                            const PipelineOptions& opts) {
  PipelineResult result;
  DatasetManifest manifest = manifest_of(docs);
  result.split =
      split_by_app(manifest, opts.train_fraction, opts.config.seed);
  result.split_digest = split_digest(result.split);
  std::unordered_set<std::string> train_ids(result.split.train_ids.begin(),
                                            result.split.train_ids.end());

  std::vector<SequenceUnit> train_units, test_units, all_units;
  for (const auto& doc : docs) {
    auto units = segment(doc, opts.kind, &result.notes);
    auto& side = train_ids.count(doc.app_id) ? train_units : test_units;
    side.insert(side.end(), units.begin(), units.end());
    all_units.insert(all_units.end(), std::make_move_iterator(units.begin()),
                     std::make_move_iterator(units.end()));
  }

  result.vocab =
      build_vocabulary(train_units, opts.vocab_max_size, opts.vocab_min_freq);
  result.model_config = opts.config;
  result.model_config.vocab_size = result.vocab.size();

  const size_t L = result.model_config.seq_len;
  std::vector<EncodedSequence> train_set, test_set;
  train_set.reserve(train_units.size());
  for (const auto& u : train_units) {
    train_set.push_back(encode(u, result.vocab, L));
  }
  test_set.reserve(test_units.size());
  for (const auto& u : test_units) {
    test_set.push_back(encode(u, result.vocab, L));
  }
  result.n_train_sequences = train_set.size();
  result.n_test_sequences = test_set.size();

  TrainResult trained =
      train(result.model_config, train_set, opts.max_sequences);
  result.params = std::move(trained.params);
  result.epoch_losses = std::move(trained.epoch_losses);
  result.consumed_per_epoch = std::move(trained.consumed_per_epoch);

  std::vector<double> probs =
      predict_probs(result.params, result.model_config, test_set);
  ContingencyTable seq_table;
  for (size_t i = 0; i < test_set.size(); ++i) {
    bool predicted = probs[i] >= opts.threshold;
    bool actual = test_set[i].label == 1;
    if (predicted && actual) ++seq_table.tp;
    if (predicted && !actual) ++seq_table.fp;
    if (!predicted && !actual) ++seq_table.tn;
    if (!predicted && actual) ++seq_table.fn;
  }
  result.seq_table = seq_table;
  result.seq_metrics = metrics_from(seq_table);
  result.app_table =
      aggregate_app(test_set, probs, opts.threshold, opts.app_agg);
  result.app_metrics = metrics_from(result.app_table);

  result.stats = corpus_stats(docs, all_units);
  return result;
}

}  // namespace dalseq
