#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dalseq/experiment.hpp"
#include "dalseq/pipeline.hpp"

namespace dalseq {

using ordered_json = nlohmann::ordered_json;

ordered_json json_of(const ModelConfig& config);
ordered_json json_of(const ContingencyTable& table);
ordered_json json_of(const Metrics& metrics);
ordered_json json_of(const CorpusStats& stats);
ordered_json json_of(const SynthSpec& spec);
ordered_json json_of(const ExperimentRow& row);

ModelConfig model_config_from_json(const ordered_json& j);

// Shortest round-trip formatting, identical to the JSON writer's, so CSV
// output is byte-stable.
std::string csv_number(double v);

ordered_json granularity_report_json(const GranularityReport& report);
std::string granularity_report_csv(const GranularityReport& report);

ordered_json path_token_report_json(const PathTokenReport& report);
std::string path_token_report_csv(const PathTokenReport& report);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace dalseq
