#pragma once

#include <string>

#include <json.hpp>

#include "idealtk/density.hpp"
#include "idealtk/experiments.hpp"
#include "idealtk/limit_points.hpp"

namespace idealtk {

// ADL hooks so nlohmann::json(value) just works for the report types.
void to_json(nlohmann::json& j, const SchedulePoint& p);
void to_json(nlohmann::json& j, const DensityEstimate& est);
void to_json(nlohmann::json& j, const TailSumReport& report);
void to_json(nlohmann::json& j, const EpsLevel& level);
void to_json(nlohmann::json& j, const CandidateReport& cand);
void to_json(nlohmann::json& j, const LimitPointReport& report);
void to_json(nlohmann::json& j, const SampleRecord& rec);
void to_json(nlohmann::json& j, const ExperimentResult& result);

std::string timestamp_utc();

// Report envelope: {header: {tool, version, timestamp}, config, result}.
// The timestamp is the only non-deterministic field and lives in the header
// block so byte-level comparisons can mask it.
nlohmann::json make_report(const std::string& command,
                           const nlohmann::json& config,
                           const nlohmann::json& result);

// One row per sample: seed,deviation,verdict.
std::string experiment_csv(const ExperimentResult& result);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace idealtk
