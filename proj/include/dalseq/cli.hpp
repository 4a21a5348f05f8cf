#pragma once

#include <filesystem>
#include <string>

#include "dalseq/harness.hpp"
#include "dalseq/types.hpp"

namespace dalseq {

// Fully resolved invocation of one subcommand. Serialized into the output
// directory before any work starts; cmd_replay reruns from that file.
struct CliOptions {
  std::string subcommand;  // ingest | segments | run | experiment
  std::string corpus;      // ingest: corpus root with benign/ malicious/
  std::string manifest;    // ingest: explicit manifest path (overrides corpus)
  std::string cache;       // segments/run: directory written by ingest
  std::string out;         // output directory
  std::string experiment;  // granularity | path-token

  UnitKind unit = UnitKind::Csm;
  Dialect dialect = Dialect::Auto;  // force a dialect during ingest
  size_t seq_len = 0;               // 0 = per-kind default
  size_t vocab_size = 30000;
  size_t min_freq = 1;
  double threshold = 0.5;
  double train_fraction = 0.8;
  size_t max_sequences = 0;
  std::string app_agg = "mean";  // mean | vote

  ModelConfig model;  // epochs, batch, lr, dims, dropout, seed
};

int cmd_ingest(const CliOptions& opts);
int cmd_segments(const CliOptions& opts);
int cmd_run(const CliOptions& opts);
int cmd_experiment(const CliOptions& opts);

// Reruns the subcommand recorded in a resolved-config file; out_override
// redirects the output directory when non-empty.
int cmd_replay(const std::filesystem::path& config_path,
               const std::string& out_override = "");

// Maps an ErrorKind to the process exit code: 2 for usage/config mistakes,
// 1 for runtime failures.
int exit_code_for(ErrorKind kind);

extern const char* kToolVersion;
extern const char* kFormatVersion;

}  // namespace dalseq
