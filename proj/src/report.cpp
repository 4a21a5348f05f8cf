#include "dalseq/report.hpp"

#include <fstream>

namespace dalseq {

ordered_json json_of(const ModelConfig& c) {
  ordered_json j;
  j["seq_len"] = c.seq_len;
  j["vocab_size"] = c.vocab_size;
  j["embedding_dim"] = c.embedding_dim;
  j["hidden_size"] = c.hidden_size;
  j["dense_size"] = c.dense_size;
  j["dropout_rate"] = c.dropout_rate;
  j["batch_size"] = c.batch_size;
  j["learning_rate"] = c.learning_rate;
  j["epochs"] = c.epochs;
  j["seed"] = c.seed;
  j["mean_pooling"] = c.mean_pooling;
  return j;
}

ModelConfig model_config_from_json(const ordered_json& j) {
  ModelConfig c;
  c.seq_len = j.at("seq_len").get<size_t>();
  c.vocab_size = j.at("vocab_size").get<size_t>();
  c.embedding_dim = j.at("embedding_dim").get<size_t>();
  c.hidden_size = j.at("hidden_size").get<size_t>();
  c.dense_size = j.at("dense_size").get<size_t>();
  c.dropout_rate = j.at("dropout_rate").get<double>();
  c.batch_size = j.at("batch_size").get<size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<size_t>();
  c.seed = j.at("seed").get<uint64_t>();
  c.mean_pooling = j.at("mean_pooling").get<bool>();
  return c;
}

ordered_json json_of(const ContingencyTable& t) {
  ordered_json j;
  j["tp"] = t.tp;
  j["fp"] = t.fp;
  j["tn"] = t.tn;
  j["fn"] = t.fn;
  return j;
}

ordered_json json_of(const Metrics& m) {
  ordered_json j;
  j["tpr"] = m.tpr;
  j["fpr"] = m.fpr;
  j["acc"] = m.acc;
  return j;
}

ordered_json json_of(const CorpusStats& s) {
  ordered_json j;
  j["files_benign"] = s.files_benign;
  j["files_malicious"] = s.files_malicious;
  j["n_sequences"] = s.n_sequences;
  j["mean_tokens_per_sequence"] = s.mean_tokens_per_sequence;
  j["mean_lines_per_unit"] = s.mean_lines_per_unit;
  return j;
}

namespace {

std::string path_mode_name(PathMode m) {
  switch (m) {
    case PathMode::Neutral:
      return "neutral";
    case PathMode::Correlated:
      return "correlated";
    case PathMode::Randomized:
      return "randomized";
  }
  return "neutral";
}

std::string plant_mode_name(PlantMode m) {
  switch (m) {
    case PlantMode::None:
      return "none";
    case PlantMode::MarkerEveryUnit:
      return "marker-every-unit";
    case PlantMode::MultiScopePattern:
      return "multi-scope-pattern";
  }
  return "none";
}

}  // namespace

ordered_json json_of(const SynthSpec& s) {
  ordered_json j;
  j["benign_apps"] = s.benign_apps;
  j["malicious_apps"] = s.malicious_apps;
  j["classes_per_app"] = s.classes_per_app;
  j["methods_per_class"] = s.methods_per_class;
  j["blocks_per_method"] = s.blocks_per_method;
  j["instr_per_block"] = s.instr_per_block;
  j["invoke_fraction"] = s.invoke_fraction;
  j["plant"] = plant_mode_name(s.plant);
  j["marker_unit"] = to_string(s.marker_unit);
  j["marker_token"] = s.marker_token;
  j["paths"] = path_mode_name(s.paths);
  j["seed"] = s.seed;
  return j;
}

ordered_json json_of(const ExperimentRow& r) {
  ordered_json j;
  j["kind"] = to_string(r.kind);
  j["seq_len"] = r.seq_len;
  j["sequence_table"] = json_of(r.seq_table);
  j["sequence_metrics"] = json_of(r.seq_metrics);
  j["app_metrics"] = json_of(r.app_metrics);
  j["mean_tokens"] = r.mean_tokens;
  j["n_sequences"] = r.n_sequences;
  j["n_train"] = r.n_train;
  j["n_test"] = r.n_test;
  j["epoch_losses"] = r.epoch_losses;
  return j;
}

std::string csv_number(double v) { return ordered_json(v).dump(); }

ordered_json granularity_report_json(const GranularityReport& report) {
  ordered_json j;
  j["experiment"] = "granularity";
  j["corpus"] = json_of(report.spec);
  j["base_config"] = json_of(report.base_config);
  j["train_fraction"] = report.train_fraction;
  j["threshold"] = report.threshold;
  j["split_digest"] = report.split_digest;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) rows.push_back(json_of(row));
  j["rows"] = rows;
  return j;
}

std::string granularity_report_csv(const GranularityReport& report) {
  std::string csv = "kind,dialect,tpr,fpr,acc,mean_tokens,n_sequences\n";
  for (const auto& r : report.rows) {
    csv += to_string(r.kind) + ",apktool," + csv_number(r.seq_metrics.tpr) +
           "," + csv_number(r.seq_metrics.fpr) + "," +
           csv_number(r.seq_metrics.acc) + "," + csv_number(r.mean_tokens) +
           "," + std::to_string(r.n_sequences) + "\n";
  }
  return csv;
}

ordered_json path_token_report_json(const PathTokenReport& report) {
  ordered_json j;
  j["experiment"] = "path-token";
  j["corpus"] = json_of(report.spec);
  j["config"] = json_of(report.config);
  j["kind"] = to_string(report.kind);
  j["train_fraction"] = report.train_fraction;
  j["threshold"] = report.threshold;
  j["split_digest"] = report.split_digest;
  j["with_paths"] = json_of(report.with_paths);
  j["without_paths"] = json_of(report.without_paths);
  return j;
}

std::string path_token_report_csv(const PathTokenReport& report) {
  std::string csv = "arm,kind,dialect,tpr,fpr,acc,mean_tokens,n_sequences\n";
  auto row = [&](const char* arm, const ExperimentRow& r) {
    csv += std::string(arm) + "," + to_string(r.kind) + ",apktool," +
           csv_number(r.seq_metrics.tpr) + "," + csv_number(r.seq_metrics.fpr) +
           "," + csv_number(r.seq_metrics.acc) + "," +
           csv_number(r.mean_tokens) + "," + std::to_string(r.n_sequences) +
           "\n";
  };
  row("with-paths", report.with_paths);
  row("without-paths", report.without_paths);
  return csv;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::MissingFile, "cannot write: " + path.string());
  }
  out.write(content.data(), std::streamsize(content.size()));
}

}  // namespace dalseq
