#pragma once

#include <string>
#include <vector>

#include "dalseq/harness.hpp"
#include "dalseq/segment.hpp"
#include "dalseq/synth.hpp"

namespace dalseq {

struct PipelineOptions {
  UnitKind kind = UnitKind::Csm;
  ModelConfig config;          // seq_len already resolved for the kind
  size_t vocab_max_size = 30000;
  size_t vocab_min_freq = 1;
  double threshold = 0.5;
  double train_fraction = 0.8;
  size_t max_sequences = 0;    // per-epoch cap; 0 = no cap
  AppAggregation app_agg = AppAggregation::MeanProb;
};

struct PipelineResult {
  ModelConfig model_config;        // vocab_size set to the built vocabulary
  Vocabulary vocab;
  ModelParams params;
  std::vector<double> epoch_losses;
  std::vector<size_t> consumed_per_epoch;
  ContingencyTable seq_table;
  Metrics seq_metrics;
  ContingencyTable app_table;
  Metrics app_metrics;
  CorpusStats stats;               // over the whole corpus at this kind
  AppSplit split;
  std::string split_digest;
  size_t n_train_sequences = 0;
  size_t n_test_sequences = 0;
  SegmentNotes notes;
};

// segment -> vocabulary (train side only) -> encode -> train -> evaluate.
// Deterministic in opts.config.seed.
PipelineResult run_pipeline(const std::vector<RawDocument>& docs,
                            const PipelineOptions& opts);

// FNV-1a over the sorted train/test id lists.
std::string split_digest(const AppSplit& split);

}  // namespace dalseq
