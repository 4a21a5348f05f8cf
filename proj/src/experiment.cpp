#include "dalseq/experiment.hpp"

namespace dalseq {

namespace {

ExperimentRow row_from(UnitKind kind, const PipelineResult& r) {
  ExperimentRow row;
  row.kind = kind;
  row.seq_len = r.model_config.seq_len;
  row.seq_table = r.seq_table;
  row.seq_metrics = r.seq_metrics;
  row.app_metrics = r.app_metrics;
  row.mean_tokens = r.stats.mean_tokens_per_sequence;
  row.n_sequences = r.stats.n_sequences;
  row.n_train = r.n_train_sequences;
  row.n_test = r.n_test_sequences;
  row.epoch_losses = r.epoch_losses;
  return row;
}

}  // namespace

GranularityReport granularity_experiment(
    const SynthSpec& spec, const ModelConfig& base_config,
    double train_fraction, double threshold,
    std::array<size_t, 4> seq_len_overrides) {
  GranularityReport report;
  report.spec = spec;
  report.base_config = base_config;
  report.train_fraction = train_fraction;
  report.threshold = threshold;

  std::vector<RawDocument> docs = generate_corpus(spec);
  const std::array<UnitKind, 4> kinds = {UnitKind::Ism, UnitKind::Bsm,
                                         UnitKind::Msm, UnitKind::Csm};
  for (size_t k = 0; k < kinds.size(); ++k) {
    PipelineOptions opts;
    opts.kind = kinds[k];
    opts.config = base_config;
    opts.config.seq_len =
        seq_len_overrides[k] != 0 ? seq_len_overrides[k] : seq_len_for(kinds[k]);
    opts.train_fraction = train_fraction;
    opts.threshold = threshold;
    PipelineResult result = run_pipeline(docs, opts);
    report.rows[k] = row_from(kinds[k], result);
    report.split_digest = result.split_digest;  // same seed, same split
  }
  return report;
}

PathTokenReport path_token_experiment(const SynthSpec& spec,
                                      const ModelConfig& config,
                                      UnitKind kind, double train_fraction,
                                      double threshold) {
  PathTokenReport report;
  report.spec = spec;
  report.config = config;
  report.kind = kind;
  report.train_fraction = train_fraction;
  report.threshold = threshold;

  PipelineOptions opts;
  opts.kind = kind;
  opts.config = config;
  opts.config.seq_len = config.seq_len ? config.seq_len : seq_len_for(kind);
  opts.train_fraction = train_fraction;
  opts.threshold = threshold;

  SynthSpec arm = spec;
  arm.paths = PathMode::Correlated;
  PipelineResult with_result = run_pipeline(generate_corpus(arm), opts);
  report.with_paths = row_from(kind, with_result);

  arm.paths = PathMode::Randomized;
  PipelineResult without_result = run_pipeline(generate_corpus(arm), opts);
  report.without_paths = row_from(kind, without_result);

  if (with_result.split_digest != without_result.split_digest) {
    throw Error(ErrorKind::BadFormat,
                "path experiment arms diverged in their app split");
  }
  report.split_digest = with_result.split_digest;
  return report;
}

SynthSpec default_granularity_spec(uint64_t seed) {
  SynthSpec spec;
  spec.benign_apps = 60;
  spec.malicious_apps = 60;
  spec.classes_per_app = 3;
  spec.methods_per_class = 4;
  spec.blocks_per_method = 2;
  spec.instr_per_block = 2;
  spec.invoke_fraction = 0.5;
  spec.plant = PlantMode::MultiScopePattern;
  spec.paths = PathMode::Neutral;
  spec.seed = seed;
  return spec;
}

ModelConfig default_granularity_config(uint64_t seed) {
  ModelConfig config;
  config.batch_size = 32;
  config.epochs = 30;
  config.learning_rate = 0.002;
  config.seed = seed;
  return config;
}

SynthSpec default_path_token_spec(uint64_t seed) {
  SynthSpec spec;
  spec.benign_apps = 60;
  spec.malicious_apps = 60;
  spec.classes_per_app = 2;
  spec.methods_per_class = 2;
  spec.blocks_per_method = 3;
  spec.instr_per_block = 2;
  spec.invoke_fraction = 1.0;
  spec.plant = PlantMode::None;
  spec.seed = seed;
  return spec;
}

ModelConfig default_path_token_config(uint64_t seed) {
  ModelConfig config;
  config.seq_len = seq_len_for(UnitKind::Bsm);
  config.batch_size = 32;
  config.epochs = 15;
  config.learning_rate = 0.002;
  config.seed = seed;
  return config;
}

SynthSpec default_planted_spec(uint64_t seed) {
  SynthSpec spec;
  spec.benign_apps = 31;
  spec.malicious_apps = 31;
  spec.classes_per_app = 4;
  spec.methods_per_class = 5;
  spec.blocks_per_method = 4;
  spec.instr_per_block = 2;
  spec.invoke_fraction = 0.5;
  spec.plant = PlantMode::MarkerEveryUnit;
  spec.marker_unit = UnitKind::Bsm;
  spec.paths = PathMode::Neutral;
  spec.seed = seed;
  return spec;
}

}  // namespace dalseq
