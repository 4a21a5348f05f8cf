#pragma once

#include <array>
#include <string>
#include <vector>

#include "dalseq/pipeline.hpp"

namespace dalseq {

struct ExperimentRow {
  UnitKind kind = UnitKind::Ism;
  size_t seq_len = 0;
  ContingencyTable seq_table;
  Metrics seq_metrics;
  Metrics app_metrics;
  double mean_tokens = 0.0;
  uint64_t n_sequences = 0;
  size_t n_train = 0;
  size_t n_test = 0;
  std::vector<double> epoch_losses;
};

// One corpus with co-occurrence patterns planted at block, method and class
// scope, trained and evaluated at all four granularities with the same app
// split. seq_len_overrides[kind] != 0 replaces the per-kind default length
// (recorded in the row).
struct GranularityReport {
  SynthSpec spec;
  ModelConfig base_config;
  double train_fraction = 0.8;
  double threshold = 0.5;
  std::string split_digest;
  std::array<ExperimentRow, 4> rows;  // ism, bsm, msm, csm
};

GranularityReport granularity_experiment(
    const SynthSpec& spec, const ModelConfig& base_config,
    double train_fraction = 0.8, double threshold = 0.5,
    std::array<size_t, 4> seq_len_overrides = {});

// Two corpora with identical skeletons (same apps, structure and splits),
// differing only in invoke descriptor emission: correlated label-pool paths
// as their own tokens vs randomized paths folded into the descriptor.
struct PathTokenReport {
  SynthSpec spec;  // paths field reflects the base spec; arms override it
  ModelConfig config;
  UnitKind kind = UnitKind::Bsm;
  double train_fraction = 0.8;
  double threshold = 0.5;
  std::string split_digest;  // identical across arms by construction
  ExperimentRow with_paths;
  ExperimentRow without_paths;
};

PathTokenReport path_token_experiment(const SynthSpec& spec,
                                      const ModelConfig& config,
                                      UnitKind kind = UnitKind::Bsm,
                                      double train_fraction = 0.8,
                                      double threshold = 0.5);

// Defaults used by the CLI and the acceptance suite.
SynthSpec default_granularity_spec(uint64_t seed);
ModelConfig default_granularity_config(uint64_t seed);
SynthSpec default_path_token_spec(uint64_t seed);
ModelConfig default_path_token_config(uint64_t seed);
SynthSpec default_planted_spec(uint64_t seed);  // MarkerEveryUnit at BSM

}  // namespace dalseq
