#include "idealtk/report_json.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "idealtk/error.hpp"
#include "idealtk/version.hpp"

namespace idealtk {

void to_json(nlohmann::json& j, const SchedulePoint& p) {
  j = nlohmann::json{{"n", p.n}, {"ratio", p.ratio}};
}

void to_json(nlohmann::json& j, const DensityEstimate& est) {
  j = nlohmann::json{{"value", est.value},
                     {"tail_max", est.tail_max},
                     {"tail_spread", est.tail_spread},
                     {"converged", est.converged},
                     {"trace", est.trace}};
}

void to_json(nlohmann::json& j, const TailSumReport& report) {
  j = nlohmann::json{{"cutpoints", report.cutpoints},
                     {"tails", report.tails},
                     {"flattening_ratio", report.flattening_ratio},
                     {"verdict", to_string(report.verdict)}};
}

void to_json(nlohmann::json& j, const EpsLevel& level) {
  j = nlohmann::json{{"eps", level.eps},
                     {"lambda_value", level.lambda_value},
                     {"gamma_value", level.gamma_value},
                     {"count", level.count},
                     {"min_member", level.min_member},
                     {"empty", level.empty},
                     {"censored", level.censored}};
}

void to_json(nlohmann::json& j, const CandidateReport& cand) {
  j = nlohmann::json{{"ell", cand.ell},
                     {"score", cand.lambda_score},
                     {"in_lambda", cand.lambda_member},
                     {"unresolved", cand.lambda_unresolved},
                     {"fine_resolved", cand.fine_resolved},
                     {"cluster_score", cand.gamma_score},
                     {"cluster_eps", cand.gamma_eps},
                     {"in_gamma", cand.gamma_member},
                     {"eps_trace", cand.levels}};
}

void to_json(nlohmann::json& j, const LimitPointReport& report) {
  j = nlohmann::json{{"q", report.q},
                     {"gamma_threshold", report.gamma_threshold},
                     {"candidates", report.candidates},
                     {"lambda_points", report.lambda_points()},
                     {"gamma_points", report.gamma_points()}};
}

void to_json(nlohmann::json& j, const SampleRecord& rec) {
  j = nlohmann::json{{"index", rec.index},
                     {"seed", rec.seed},
                     {"deviation", rec.normality_deviation},
                     {"selected_density", rec.selected_density},
                     {"verdict", rec.verdict},
                     {"estimator_ok", rec.estimator_ok},
                     {"containment_ok", rec.containment_ok},
                     {"lambda_count", rec.lambda_count},
                     {"gamma_count", rec.gamma_count}};
}

void to_json(nlohmann::json& j, const ExperimentResult& result) {
  j = nlohmann::json{
      {"sample_count", result.sample_count},
      {"agreement_fraction", result.agreement_fraction},
      {"containment_violations", result.containment_violations},
      {"base_lambda_equals_gamma", result.base_lambda_equals_gamma},
      {"base_lambda_points", result.base_lambda_points},
      {"base_gamma_points", result.base_gamma_points},
      {"samples", result.samples}};
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

nlohmann::json make_report(const std::string& command,
                           const nlohmann::json& config,
                           const nlohmann::json& result) {
  return nlohmann::json{{"header",
                         {{"tool", kToolName},
                          {"version", kVersion},
                          {"command", command},
                          {"timestamp", timestamp_utc()}}},
                        {"config", config},
                        {"result", result}};
}

std::string experiment_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "seed,deviation,verdict\n";
  for (const auto& rec : result.samples)
    out << rec.seed << ',' << rec.normality_deviation << ','
        << (rec.verdict ? 1 : 0) << '\n';
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error("write failed for " + path);
}

}  // namespace idealtk
