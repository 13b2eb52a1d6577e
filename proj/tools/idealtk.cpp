#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idealtk/density.hpp"
#include "idealtk/error.hpp"
#include "idealtk/experiments.hpp"
#include "idealtk/limit_points.hpp"
#include "idealtk/report_json.hpp"
#include "idealtk/sequences.hpp"
#include "idealtk/truncated_set.hpp"
#include "idealtk/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitInconclusive = 3;

struct CommonOpts {
  std::string cache_dir;
  std::string out_path;
  std::string config_path;
  bool strict = false;
};

// Flat "key = value" config files. Flags win: a key is applied only when the
// matching option was not given on the command line.
class ConfigBindings {
 public:
  explicit ConfigBindings(CLI::App* cmd) : cmd_(cmd) {}

  template <typename T>
  void bind(const std::string& key, T& var) {
    setters_[key] = [&var](const std::string& text) {
      std::istringstream in(text);
      in >> var;
      if (in.fail()) throw idealtk::Error("config: bad value '" + text + "'");
    };
  }

  void bind_string(const std::string& key, std::string& var) {
    setters_[key] = [&var](const std::string& text) { var = text; };
  }

  void bind_doubles(const std::string& key, std::vector<double>& var) {
    setters_[key] = [&var](const std::string& text) {
      std::vector<double> values;
      std::string item;
      std::istringstream in(text);
      while (in >> item) values.push_back(std::stod(item));
      if (values.empty())
        throw idealtk::Error("config: no values for list key");
      var = std::move(values);
    };
  }

  void apply(const std::string& path) const {
    std::ifstream in(path);
    if (!in) throw idealtk::Error("config: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) continue;
      const auto it = setters_.find(key);
      if (it == setters_.end())
        throw idealtk::Error("config: unknown key '" + key + "'");
      const auto* opt = cmd_->get_option_no_throw("--" + key);
      if (opt != nullptr && opt->count() > 0) continue;  // flag wins
      it->second(value);
    }
  }

 private:
  CLI::App* cmd_;
  std::map<std::string, std::function<void(const std::string&)>> setters_;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  const char* env_cache = std::getenv("IDEALTK_CACHE_DIR");
  if (env_cache != nullptr) opts.cache_dir = env_cache;
  cmd->add_option("--cache-dir", opts.cache_dir,
                  "Directory for sieve caches (env IDEALTK_CACHE_DIR)");
  cmd->add_option("--out", opts.out_path, "Write the JSON report here");
  cmd->add_flag("--strict", opts.strict,
                "Exit 3 when any verdict is inconclusive/unresolved");
  cmd->add_option("--config", opts.config_path,
                  "Flat key=value config file; flags win");
}

void emit(const nlohmann::json& report, const CommonOpts& opts) {
  const std::string text = report.dump(2) + "\n";
  if (opts.out_path.empty())
    std::cout << text;
  else
    idealtk::write_text_file(opts.out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-truncation toolkit for ideal convergence experiments: "
               "densities, submeasure norms, limit/cluster point estimation "
               "and random-subsequence sampling"};
  app.set_version_flag("--version", idealtk::kVersion);
  app.require_subcommand(1);

  // --- density ---------------------------------------------------------
  auto* density_cmd =
      app.add_subcommand("density", "Upper alpha-density of a set literal");
  std::string density_set;
  double density_alpha = 0.0;
  std::uint64_t density_n = 1000000;
  int density_points = 20;
  CommonOpts density_opts;
  density_cmd->add_option("set", density_set, "Set literal, e.g. multiples:5")
      ->required();
  density_cmd->add_option("--alpha", density_alpha, "Weight exponent (>= -1)");
  density_cmd->add_option("--N", density_n, "Horizon");
  density_cmd->add_option("--schedule-points", density_points,
                          "Checkpoints in the horizon schedule");
  add_common(density_cmd, density_opts);

  // --- limits ----------------------------------------------------------
  auto* limits_cmd = app.add_subcommand(
      "limits", "Limit/cluster point estimation for a sequence");
  std::string limits_seq;
  std::string limits_ideal = "alpha:0";
  std::uint64_t limits_n = 1000000;
  idealtk::LimitPointParams limits_params;
  CommonOpts limits_opts;
  limits_cmd->add_option("sequence", limits_seq, "Sequence, e.g. lpf")
      ->required();
  limits_cmd->add_option("--ideal", limits_ideal,
                         "Ideal spec: alpha:a | erdos-ulam:W | summable:W");
  limits_cmd->add_option("--q", limits_params.q, "Limit-point threshold");
  limits_cmd->add_option("--N", limits_n, "Horizon");
  limits_cmd->add_option("--eps", limits_params.eps_schedule,
                         "Eps schedule, strictly decreasing");
  limits_cmd->add_option("--grid-points", limits_params.grid_points,
                         "Uniform candidate grid size");
  limits_cmd->add_option("--floor-frac", limits_params.multiplicity_floor_frac,
                         "Observed-value multiplicity floor fraction");
  limits_cmd->add_option("--gamma-threshold", limits_params.gamma_threshold,
                         "Cluster threshold (0 = matched to q)");
  add_common(limits_cmd, limits_opts);

  // --- subsample -------------------------------------------------------
  auto* sub_cmd = app.add_subcommand(
      "subsample", "Monte Carlo random-subsequence experiments");
  std::string sub_seq;
  std::string sub_ideal = "alpha:0";
  std::string sub_experiment = "agreement";
  std::uint64_t sub_n = 1000000;
  std::string sub_csv;
  idealtk::ExperimentParams sub_params;
  CommonOpts sub_opts;
  sub_cmd->add_option("sequence", sub_seq, "Sequence, e.g. lpf")->required();
  sub_cmd->add_option("--ideal", sub_ideal, "Ideal spec");
  sub_cmd
      ->add_option("--experiment", sub_experiment,
                   "agreement | zero-one")
      ->check(CLI::IsMember({"agreement", "zero-one"}));
  sub_cmd->add_option("--M", sub_params.samples, "Sample count");
  sub_cmd->add_option("--N", sub_n, "Horizon");
  sub_cmd->add_option("--seed", sub_params.base_seed, "Base seed");
  sub_cmd->add_option("--threads", sub_params.threads, "Parallelism degree");
  sub_cmd->add_option("--q", sub_params.limit_params.q,
                      "Limit-point threshold");
  sub_cmd->add_option("--eps", sub_params.limit_params.eps_schedule,
                      "Eps schedule, strictly decreasing");
  sub_cmd->add_option("--delta", sub_params.metric.delta,
                      "Point-matching tolerance");
  sub_cmd->add_option("--score-scale", sub_params.metric.score_scale,
                      "Subsequence threshold rescaling");
  sub_cmd->add_option("--csv", sub_csv, "Also write a per-sample CSV here");
  add_common(sub_cmd, sub_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (density_cmd->parsed()) {
      ConfigBindings cfg(density_cmd);
      cfg.bind("alpha", density_alpha);
      cfg.bind("N", density_n);
      cfg.bind("schedule-points", density_points);
      cfg.bind_string("cache-dir", density_opts.cache_dir);
      cfg.bind_string("out", density_opts.out_path);
      if (!density_opts.config_path.empty())
        cfg.apply(density_opts.config_path);

      std::unique_ptr<idealtk::LpfTable> table;
      if (density_set.rfind("lpf-level:", 0) == 0)
        table = std::make_unique<idealtk::LpfTable>(
            idealtk::LpfTable::load_or_build(density_n,
                                             density_opts.cache_dir));
      const auto set =
          idealtk::parse_set(density_set, density_n, table.get());
      const auto schedule =
          idealtk::default_schedule(density_n, density_points);
      const auto est =
          idealtk::upper_alpha_density(set, density_alpha, schedule);
      const nlohmann::json config{{"set", density_set},
                                  {"alpha", density_alpha},
                                  {"N", density_n},
                                  {"schedule_points", density_points}};
      emit(idealtk::make_report("density", config, est), density_opts);
      if (density_opts.strict && !est.converged) return kExitInconclusive;
      return kExitOk;
    }

    if (limits_cmd->parsed()) {
      ConfigBindings cfg(limits_cmd);
      cfg.bind_string("ideal", limits_ideal);
      cfg.bind("q", limits_params.q);
      cfg.bind("N", limits_n);
      cfg.bind_doubles("eps", limits_params.eps_schedule);
      cfg.bind("grid-points", limits_params.grid_points);
      cfg.bind("floor-frac", limits_params.multiplicity_floor_frac);
      cfg.bind("gamma-threshold", limits_params.gamma_threshold);
      cfg.bind_string("cache-dir", limits_opts.cache_dir);
      cfg.bind_string("out", limits_opts.out_path);
      if (!limits_opts.config_path.empty())
        cfg.apply(limits_opts.config_path);

      const auto x = idealtk::SequenceSource::parse(limits_seq, limits_n,
                                                    limits_opts.cache_dir);
      const auto spec = idealtk::IdealSpec::parse(limits_ideal);
      const auto report =
          idealtk::estimate_limit_points(x, spec, limits_params);
      const nlohmann::json config{
          {"sequence", limits_seq},       {"ideal", limits_ideal},
          {"N", limits_n},                {"q", limits_params.q},
          {"eps", limits_params.eps_schedule},
          {"grid_points", limits_params.grid_points},
          {"floor_frac", limits_params.multiplicity_floor_frac},
          {"gamma_threshold", report.gamma_threshold}};
      emit(idealtk::make_report("limits", config, report), limits_opts);
      if (limits_opts.strict)
        for (const auto& c : report.candidates)
          if (c.lambda_unresolved) return kExitInconclusive;
      return kExitOk;
    }

    if (sub_cmd->parsed()) {
      ConfigBindings cfg(sub_cmd);
      cfg.bind_string("ideal", sub_ideal);
      cfg.bind_string("experiment", sub_experiment);
      cfg.bind("M", sub_params.samples);
      cfg.bind("N", sub_n);
      cfg.bind("seed", sub_params.base_seed);
      cfg.bind("threads", sub_params.threads);
      cfg.bind("q", sub_params.limit_params.q);
      cfg.bind_doubles("eps", sub_params.limit_params.eps_schedule);
      cfg.bind("delta", sub_params.metric.delta);
      cfg.bind("score-scale", sub_params.metric.score_scale);
      cfg.bind_string("csv", sub_csv);
      cfg.bind_string("cache-dir", sub_opts.cache_dir);
      cfg.bind_string("out", sub_opts.out_path);
      if (!sub_opts.config_path.empty()) cfg.apply(sub_opts.config_path);

      const auto x = idealtk::SequenceSource::parse(sub_seq, sub_n,
                                                    sub_opts.cache_dir);
      const auto spec = idealtk::IdealSpec::parse(sub_ideal);
      const auto result =
          sub_experiment == "agreement"
              ? idealtk::lambda_agreement_experiment(x, spec, sub_params)
              : idealtk::zero_one_experiment(x, spec, sub_params);
      const nlohmann::json config{
          {"sequence", sub_seq},
          {"ideal", sub_ideal},
          {"experiment", sub_experiment},
          {"M", sub_params.samples},
          {"N", sub_n},
          {"seed", sub_params.base_seed},
          {"threads", sub_params.threads},
          {"q", sub_params.limit_params.q},
          {"eps", sub_params.limit_params.eps_schedule},
          {"delta", sub_params.metric.delta},
          {"score_scale", sub_params.metric.score_scale}};
      emit(idealtk::make_report("subsample", config, result), sub_opts);
      if (!sub_csv.empty())
        idealtk::write_text_file(sub_csv, idealtk::experiment_csv(result));
      if (sub_opts.strict)
        for (const auto& rec : result.samples)
          if (!rec.estimator_ok) return kExitInconclusive;
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
