#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "smab/analysis.hpp"
#include "smab/engine.hpp"
#include "smab/fal.hpp"
#include "smab/scenarios.hpp"

namespace smab {

enum class Coupling { Independent, CommonRandomNumbers };
enum class PolicyKind { Benchmark, Fal, Fixed, Guideline, Cbb };

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Benchmark;
  FalParams fal;
  bool delta_one_over_n = false;  // horizon-tuned confidence: delta = 1/n
  std::vector<std::string> fixed_sequence;
};

struct EnvRef {
  std::string scenario;  // one of the named builders, with scenario_params
  nlohmann::json scenario_params;
  std::string file;                    // or a JSON document on disk
  std::optional<EnvSpec> inline_spec;  // or inline under "spec"
};

struct ExperimentConfig {
  EnvRef env;
  PolicyConfig policy;
  long horizon = 0;
  int replications = 1;
  uint64_t seed = 0;
  bool seed_set = false;
  Coupling coupling = Coupling::Independent;
  std::vector<long> checkpoints;  // subset of [1, horizon]; defaults to {horizon}
  int jobs = 1;
  std::string csv_path, json_path;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);

struct ReplicationData {
  std::vector<double> pseudo_regret;  // per round, learner vs benchmark trajectory
  std::vector<int> stop_stage;        // learner's per-round stop stage
  std::vector<double> utility;        // realized utility per round (cohort runs)
  FalRunAudit audit;                  // populated for the learner policy "fal"
  nlohmann::ordered_json fal_checkpoints = nlohmann::ordered_json::array();
};

struct ExperimentResult {
  ExperimentConfig config;
  double effective_delta = 0.0;  // after any 1/n substitution
  std::shared_ptr<const Env> env;
  GainTable table;
  std::vector<ReplicationData> replications;
};

// Runs `replications` independent replications of `horizon` rounds each,
// pairing every learner round with a benchmark round (independent randomness
// by default, shared per-(round, stage) variates under common-random-numbers
// coupling). The result is a pure function of the configuration: replication
// substreams are derived from the seed and merged by replication index
// regardless of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Fixed-format curve: header replication,round,stop_stage,pseudo_regret,
// cumulative_regret with '.' decimals, LF line endings and shortest
// round-trip number formatting.
std::string experiment_csv(const ExperimentResult& result);

// Mean/stddev cumulative regret at the checkpoints, regret-bound values, the
// confidence audit (learner "fal") and average realized utility (cohort
// runs).
nlohmann::ordered_json experiment_summary(const ExperimentResult& result);

}  // namespace smab
