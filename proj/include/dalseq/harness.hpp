#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dalseq/encode.hpp"
#include "dalseq/ingest.hpp"
#include "dalseq/net.hpp"
#include "dalseq/types.hpp"

namespace dalseq {

// Binary contingency counts; positive class = malicious.
struct ContingencyTable {
  uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  uint64_t total() const { return tp + fp + tn + fn; }
};

struct Metrics {
  double tpr = 0.0, fpr = 0.0, acc = 0.0;
};

// tpr = tp/(tp+fn), fpr = fp/(fp+tn), acc = (tp+tn)/total; degenerate
// denominators yield 0. Throws Error(EmptyTable) on an empty table.
Metrics metrics_from(const ContingencyTable& table);

struct AppSplit {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
};

// Deterministic stratified split; every app lands wholly on one side.
// Throws Error(TooFewApps) when either side of either label would be empty.
AppSplit split_by_app(const DatasetManifest& manifest, double train_fraction,
                      uint64_t seed);

struct TrainResult {
  ModelParams params;
  std::vector<double> epoch_losses;      // mean loss over consumed sequences
  std::vector<size_t> consumed_per_epoch;
};

// Seeded per-epoch shuffle, optional per-epoch cap, batches of
// config.batch_size with the last partial batch kept, Adam updates.
// cap == 0 means no cap. Throws Error(EmptyTrainingSet).
TrainResult train(const ModelConfig& config,
                  const std::vector<EncodedSequence>& train_set,
                  size_t cap = 0);

// prob >= threshold predicts malicious.
ContingencyTable evaluate(const ModelParams& params, const ModelConfig& config,
                          const std::vector<EncodedSequence>& test_set,
                          double threshold = 0.5);

// Per-sequence probabilities in test-set order (eval mode, batched).
std::vector<double> predict_probs(const ModelParams& params,
                                  const ModelConfig& config,
                                  const std::vector<EncodedSequence>& rows);

enum class AppAggregation { MeanProb, MajorityVote };

// App-level table from per-sequence probabilities. MeanProb: malicious iff
// the mean probability >= threshold. MajorityVote: malicious iff at least
// half of the sequences are predicted malicious.
ContingencyTable aggregate_app(const std::vector<EncodedSequence>& rows,
                               const std::vector<double>& probs,
                               double threshold,
                               AppAggregation mode = AppAggregation::MeanProb);

struct CorpusStats {
  uint64_t files_benign = 0;
  uint64_t files_malicious = 0;
  uint64_t n_sequences = 0;
  double mean_tokens_per_sequence = 0.0;
  double mean_lines_per_unit = 0.0;
};

CorpusStats corpus_stats(const std::vector<RawDocument>& docs,
                         const std::vector<SequenceUnit>& units);

}  // namespace dalseq
