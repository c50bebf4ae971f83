// Command-line front end. All simulator functionality is reached through the
// shared library's C interface; this file only assembles configuration JSON,
// moves strings to disk and maps status codes to exit codes (2 for
// parse/validation/configuration problems, 3 for runtime contract
// violations).
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "smab/smab_c.h"

namespace {

using nlohmann::json;

int exit_code(smab_status status) {
  switch (status) {
    case SMAB_OK: return 0;
    case SMAB_ERR_PARSE:
    case SMAB_ERR_VALIDATION:
    case SMAB_ERR_CONFIG: return 2;
    default: return 3;
  }
}

int fail(smab_status status) {
  std::cerr << "error: " << smab_last_error() << "\n";
  return exit_code(status);
}

struct EnvArgs {
  std::string file;
  std::string scenario;
  std::string params;

  void attach(CLI::App* cmd) {
    cmd->add_option("--env", file, "environment JSON file");
    cmd->add_option("--scenario", scenario,
                    "named scenario: worked-example, submodular-modular, "
                    "submodular-coverage, screening");
    cmd->add_option("--params", params, "scenario parameters as a JSON object");
  }

  smab_status open(smab_env** out) const {
    if (!scenario.empty())
      return smab_env_from_scenario(scenario.c_str(), params.c_str(), out);
    if (!file.empty()) return smab_env_load_file(file.c_str(), out);
    std::cerr << "error: provide --env FILE or --scenario NAME\n";
    return SMAB_ERR_CONFIG;
  }
};

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 3;
  }
  out << text;
  return 0;
}

int with_string(smab_status status, char* text, const std::string& out_path) {
  if (status != SMAB_OK) return fail(status);
  std::string owned = text ? text : "";
  smab_string_free(text);
  return emit(owned, out_path);
}

std::optional<json> load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    std::cerr << "error: invalid JSON in " << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"staged decision-process simulator"};
  app.require_subcommand(1);

  // validate
  auto* validate = app.add_subcommand("validate", "check an environment document");
  EnvArgs validate_env;
  validate_env.attach(validate);

  // gains
  auto* gains = app.add_subcommand("gains", "derived gain quantities of an environment");
  EnvArgs gains_env;
  gains_env.attach(gains);
  std::string gains_out;
  gains->add_option("--out", gains_out, "output file (default stdout)");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "regret-bound report for an environment");
  EnvArgs bounds_env;
  bounds_env.attach(bounds);
  double bounds_sigma = 0.0, bounds_delta = 0.0;
  long long bounds_n = 0;
  std::string bounds_out;
  bounds->add_option("--sigma", bounds_sigma, "sub-Gaussian noise scale")->required();
  bounds->add_option("--delta", bounds_delta, "confidence level for the fixed-delta total");
  bounds->add_option("--n", bounds_n, "horizon for the 1/n-tuned totals");
  bounds->add_option("--out", bounds_out, "output file (default stdout)");

  // enumerate-fixed
  auto* enumerate = app.add_subcommand("enumerate-fixed",
                                       "expected gains of all fixed action sequences");
  EnvArgs enumerate_env;
  enumerate_env.attach(enumerate);
  long long enumerate_max = 1000000;
  std::string enumerate_out;
  enumerate->add_option("--max", enumerate_max, "guard on the sequence count");
  enumerate->add_option("--out", enumerate_out, "output file (default stdout)");

  // scenario emit
  auto* scenario = app.add_subcommand("scenario", "scenario utilities");
  auto* scenario_emit = scenario->add_subcommand("emit", "write a builder's environment JSON");
  std::string scenario_name, scenario_params, scenario_out;
  scenario_emit->add_option("--name", scenario_name, "scenario name")->required();
  scenario_emit->add_option("--params", scenario_params, "scenario parameters (JSON object)");
  scenario_emit->add_option("--out", scenario_out, "output file (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "run a configured experiment");
  std::string run_config, run_policy, run_mask, run_delta_mode, run_coupling;
  std::string run_csv, run_json, run_checkpoints, run_fixed_sequence;
  EnvArgs run_env;
  run_env.attach(run);
  long long run_n = -1, run_seed = 0;
  int run_reps = -1, run_jobs = -1;
  double run_delta = -1.0, run_sigma = -1.0, run_epsilon = -1.0;
  bool run_seed_given = false;
  run->add_option("--config", run_config, "experiment configuration JSON file");
  run->add_option("--policy", run_policy, "benchmark | fal | fixed | guideline | cbb");
  run->add_option("--n", run_n, "number of rounds");
  run->add_option("--reps", run_reps, "number of replications");
  auto* seed_opt = run->add_option("--seed", run_seed, "RNG seed (required)");
  run->add_option("--delta", run_delta, "fal confidence level");
  run->add_option("--sigma", run_sigma, "fal sub-Gaussian scale");
  run->add_option("--epsilon", run_epsilon, "fal stop-bias");
  run->add_option("--mask", run_mask, "fal action mask: none | once-per-round");
  run->add_option("--delta-mode", run_delta_mode, "explicit | one-over-n");
  run->add_option("--coupling", run_coupling, "independent | common-random-numbers");
  run->add_option("--jobs", run_jobs, "replication-level worker threads");
  run->add_option("--sequence", run_fixed_sequence,
                  "comma-separated plan for the fixed policy");
  run->add_option("--checkpoints", run_checkpoints, "comma-separated round indices");
  run->add_option("--csv", run_csv, "write the per-round curve CSV here");
  run->add_option("--json", run_json, "write the summary JSON here");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) {
    smab_env* env = nullptr;
    smab_status status = validate_env.open(&env);
    if (status != SMAB_OK) return status == SMAB_ERR_CONFIG ? 2 : fail(status);
    smab_env_free(env);
    std::cout << "valid\n";
    return 0;
  }

  if (gains->parsed()) {
    smab_env* env = nullptr;
    smab_status status = gains_env.open(&env);
    if (status != SMAB_OK) return status == SMAB_ERR_CONFIG ? 2 : fail(status);
    char* text = nullptr;
    int rc = with_string(smab_gain_table_json(env, &text), text, gains_out);
    smab_env_free(env);
    return rc;
  }

  if (bounds->parsed()) {
    smab_env* env = nullptr;
    smab_status status = bounds_env.open(&env);
    if (status != SMAB_OK) return status == SMAB_ERR_CONFIG ? 2 : fail(status);
    char* text = nullptr;
    int rc = with_string(smab_bounds_json(env, bounds_sigma, bounds_delta, bounds_n, &text),
                         text, bounds_out);
    smab_env_free(env);
    return rc;
  }

  if (enumerate->parsed()) {
    smab_env* env = nullptr;
    smab_status status = enumerate_env.open(&env);
    if (status != SMAB_OK) return status == SMAB_ERR_CONFIG ? 2 : fail(status);
    char* text = nullptr;
    int rc = with_string(smab_enumerate_fixed_json(env, enumerate_max, &text), text,
                         enumerate_out);
    smab_env_free(env);
    return rc;
  }

  if (scenario_emit->parsed()) {
    smab_env* env = nullptr;
    smab_status status =
        smab_env_from_scenario(scenario_name.c_str(), scenario_params.c_str(), &env);
    if (status != SMAB_OK) return fail(status);
    char* text = nullptr;
    int rc = with_string(smab_env_emit_json(env, &text), text, scenario_out);
    smab_env_free(env);
    return rc;
  }

  if (run->parsed()) {
    json config = json::object();
    if (!run_config.empty()) {
      auto loaded = load_json_file(run_config);
      if (!loaded) return 2;
      config = *loaded;
    }
    if (!run_env.scenario.empty()) {
      config["env"] = json{{"scenario", run_env.scenario}};
      if (!run_env.params.empty()) {
        try {
          config["env"]["params"] = json::parse(run_env.params);
        } catch (const json::exception& e) {
          std::cerr << "error: invalid --params JSON: " << e.what() << "\n";
          return 2;
        }
      }
    } else if (!run_env.file.empty()) {
      config["env"] = json{{"file", run_env.file}};
    }
    if (!config.contains("policy")) config["policy"] = json::object();
    if (config["policy"].is_string()) config["policy"] = json{{"name", config["policy"]}};
    if (!run_policy.empty()) config["policy"]["name"] = run_policy;
    if (run_delta >= 0.0) config["policy"]["delta"] = run_delta;
    if (run_sigma >= 0.0) config["policy"]["sigma"] = run_sigma;
    if (run_epsilon >= 0.0) config["policy"]["epsilon"] = run_epsilon;
    if (!run_mask.empty()) config["policy"]["mask"] = run_mask;
    if (!run_delta_mode.empty()) config["policy"]["delta_mode"] = run_delta_mode;
    if (!run_fixed_sequence.empty()) {
      std::vector<std::string> seq;
      std::stringstream ss(run_fixed_sequence);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) seq.push_back(item);
      config["policy"]["sequence"] = seq;
    }
    if (run_n >= 0) config["horizon"] = run_n;
    if (run_reps >= 0) config["replications"] = run_reps;
    run_seed_given = seed_opt->count() > 0;
    if (run_seed_given) config["seed"] = run_seed;
    if (!run_coupling.empty()) config["coupling"] = run_coupling;
    if (run_jobs >= 1) config["jobs"] = run_jobs;
    if (!run_checkpoints.empty()) {
      std::vector<long> cps;
      std::stringstream ss(run_checkpoints);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) cps.push_back(std::stol(item));
      config["checkpoints"] = cps;
    }
    if (!run_csv.empty()) {
      if (!config.contains("output")) config["output"] = json::object();
      config["output"]["csv"] = run_csv;
    }
    if (!run_json.empty()) {
      if (!config.contains("output")) config["output"] = json::object();
      config["output"]["json"] = run_json;
    }
    if (!config.contains("seed")) {
      std::cerr << "error: run requires --seed (or a seed in the configuration)\n";
      return 2;
    }

    smab_experiment* experiment = nullptr;
    smab_status status = smab_run_config_json(config.dump().c_str(), &experiment);
    if (status != SMAB_OK) return fail(status);

    std::string csv_path = config.value("output", json::object()).value("csv", "");
    std::string json_path = config.value("output", json::object()).value("json", "");
    int rc = 0;
    if (!csv_path.empty()) {
      char* text = nullptr;
      rc = with_string(smab_experiment_csv(experiment, &text), text, csv_path);
    }
    if (rc == 0) {
      char* text = nullptr;
      rc = with_string(smab_experiment_summary_json(experiment, &text), text, json_path);
    }
    smab_experiment_free(experiment);
    return rc;
  }

  return 0;
}
