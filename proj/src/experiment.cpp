#include "smab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include "smab/log.hpp"
#include "smab/serialize.hpp"

namespace smab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kAuditSlack = 1e-9;
constexpr double kUtilityTailFraction = 0.2;

PolicyConfig policy_config_from_json(const json& doc) {
  PolicyConfig pc;
  if (doc.is_null()) return pc;
  if (doc.is_string()) {
    const std::string name = doc.get<std::string>();
    json wrapped;
    wrapped["name"] = name;
    return policy_config_from_json(wrapped);
  }
  if (!doc.is_object()) throw_parse("'policy' must be an object or policy name");
  const std::string name = doc.value("name", "benchmark");
  if (name == "benchmark")
    pc.kind = PolicyKind::Benchmark;
  else if (name == "fal")
    pc.kind = PolicyKind::Fal;
  else if (name == "fixed")
    pc.kind = PolicyKind::Fixed;
  else if (name == "guideline")
    pc.kind = PolicyKind::Guideline;
  else if (name == "cbb")
    pc.kind = PolicyKind::Cbb;
  else
    throw_parse("unknown policy '" + name + "'");
  for (const auto& [key, value] : doc.items()) {
    if (key == "name") continue;
    if (key == "delta")
      pc.fal.delta = value.get<double>();
    else if (key == "sigma")
      pc.fal.sigma = value.get<double>();
    else if (key == "epsilon")
      pc.fal.epsilon_stop_bias = value.get<double>();
    else if (key == "mask") {
      const std::string mode = value.get<std::string>();
      if (mode == "none")
        pc.fal.mask = ActionMaskMode::None;
      else if (mode == "once-per-round")
        pc.fal.mask = ActionMaskMode::OncePerRound;
      else
        throw_parse("unknown mask mode '" + mode + "'");
    } else if (key == "delta_mode") {
      const std::string mode = value.get<std::string>();
      if (mode == "one-over-n")
        pc.delta_one_over_n = true;
      else if (mode != "explicit")
        throw_parse("unknown delta_mode '" + mode + "'");
    } else if (key == "sequence")
      pc.fixed_sequence = value.get<std::vector<std::string>>();
    else
      throw_parse("unknown policy key '" + key + "'");
  }
  return pc;
}

EnvRef env_ref_from_json(const json& doc) {
  EnvRef ref;
  if (!doc.is_object()) throw_parse("'env' must be an object");
  int sources = 0;
  for (const auto& [key, value] : doc.items()) {
    if (key == "scenario") {
      ref.scenario = value.get<std::string>();
      ++sources;
    } else if (key == "params")
      ref.scenario_params = value;
    else if (key == "file") {
      ref.file = value.get<std::string>();
      ++sources;
    } else if (key == "spec") {
      ref.inline_spec = env_spec_from_json(value);
      ++sources;
    } else
      throw_parse("unknown env key '" + key + "'");
  }
  if (sources != 1) throw_parse("'env' needs exactly one of scenario, file or spec");
  return ref;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& doc) {
  if (!doc.is_object()) throw_parse("experiment configuration must be a JSON object");
  ExperimentConfig cfg;
  bool have_env = false;
  for (const auto& [key, value] : doc.items()) {
    if (key == "env") {
      cfg.env = env_ref_from_json(value);
      have_env = true;
    } else if (key == "policy")
      cfg.policy = policy_config_from_json(value);
    else if (key == "horizon")
      cfg.horizon = value.get<long>();
    else if (key == "replications")
      cfg.replications = value.get<int>();
    else if (key == "seed") {
      cfg.seed = value.get<uint64_t>();
      cfg.seed_set = true;
    } else if (key == "coupling") {
      const std::string mode = value.get<std::string>();
      if (mode == "independent")
        cfg.coupling = Coupling::Independent;
      else if (mode == "common-random-numbers")
        cfg.coupling = Coupling::CommonRandomNumbers;
      else
        throw_parse("unknown coupling mode '" + mode + "'");
    } else if (key == "checkpoints")
      cfg.checkpoints = value.get<std::vector<long>>();
    else if (key == "jobs")
      cfg.jobs = value.get<int>();
    else if (key == "output") {
      for (const auto& [okey, ovalue] : value.items()) {
        if (okey == "csv")
          cfg.csv_path = ovalue.get<std::string>();
        else if (okey == "json")
          cfg.json_path = ovalue.get<std::string>();
        else
          throw_parse("unknown output key '" + okey + "'");
      }
    } else
      throw_parse("unknown configuration key '" + key + "'");
  }
  if (!have_env) throw_parse("experiment configuration needs an 'env' entry");
  return cfg;
}

namespace {

EnvSpec resolve_env(const EnvRef& ref) {
  if (!ref.scenario.empty()) return scenario_env(ref.scenario, ref.scenario_params);
  if (!ref.file.empty()) return env_spec_from_file(ref.file);
  if (ref.inline_spec) return *ref.inline_spec;
  throw_config("empty environment reference");
}

void check_fal_estimates(const Env& env, const GainTable& table, const FalPolicy& fal,
                         const RoundTrace& trace, long round, FalRunAudit& audit) {
  if (audit.econf_violated) return;
  const FalStats& stats = fal.stats();
  const FalParams& params = fal.params();
  const long K = fal.K();
  const int T = trace.stop_stage();
  bool violated = false;
  for (int t = 1; t <= T && !violated; ++t) {
    const int x = trace.states[size_t(t - 1)];
    const double conf = fal_confidence(stats.n_state(t, x), K, params.sigma, params.delta);
    if (std::isfinite(conf) &&
        std::fabs(stats.r_hat(t, x) - env.reward_mean(t, x)) > conf + kAuditSlack)
      violated = true;
  }
  for (int t = 1; t <= T - 1 && !violated; ++t) {
    const int x = trace.states[size_t(t - 1)];
    const int a = trace.actions[size_t(t - 1)];
    const double conf = fal_confidence(stats.n_action(t, x, a), K, params.sigma, params.delta);
    if (std::isfinite(conf) &&
        std::fabs(stats.g_hat(t, x, a) - table.g[table.sxa(t, x, a)]) > conf + kAuditSlack)
      violated = true;
  }
  if (violated) {
    audit.econf_violated = true;
    audit.econf_first_round = round;
  }
}

void check_fal_selections(const GainTable& table, const FalPolicy& fal, FalRunAudit& audit) {
  for (const auto& sel : fal.last_round_selections()) {
    if (std::isinf(sel.conf)) continue;
    const double gap = table.g_star[table.sx(sel.t, sel.x)] -
                       table.g[table.sxa(sel.t, sel.x, sel.action)];
    if (gap > 2.0 * sel.conf + kAuditSlack) {
      audit.cor1_violated = true;
      ++audit.cor1_violations;
    }
  }
}

ordered_json fal_snapshot(const Env& env, const FalStats& stats, long round) {
  ordered_json states = ordered_json::array();
  for (int t = 1; t <= env.l_max(); ++t) {
    for (int x = 0; x < env.num_states(); ++x) {
      if (stats.n_state(t, x) == 0) continue;
      ordered_json entry;
      entry["t"] = t;
      entry["state"] = env.state_name(x);
      entry["n"] = stats.n_state(t, x);
      entry["r_hat"] = stats.r_hat(t, x);
      ordered_json actions = ordered_json::array();
      for (int a = 0; a <= env.num_actions(); ++a) {
        if (stats.n_action(t, x, a) == 0) continue;
        ordered_json row;
        row["action"] = env.action_name(a);
        row["n"] = stats.n_action(t, x, a);
        row["g_hat"] = stats.g_hat(t, x, a);
        actions.push_back(std::move(row));
      }
      entry["actions"] = std::move(actions);
      states.push_back(std::move(entry));
    }
  }
  ordered_json out;
  out["round"] = round;
  out["stats"] = std::move(states);
  return out;
}

std::unique_ptr<Policy> make_generic_policy(const Env& env, const GainTable& table,
                                            const PolicyConfig& pc, const FalParams& fal_params) {
  switch (pc.kind) {
    case PolicyKind::Benchmark:
      return std::make_unique<BenchmarkPolicy>(env, table);
    case PolicyKind::Fal:
      return std::make_unique<FalPolicy>(env, fal_params);
    case PolicyKind::Fixed:
      return std::make_unique<FixedSequencePolicy>(env, pc.fixed_sequence);
    default:
      throw_config("policy requires the screening scenario's cohort simulation");
  }
}

ReplicationData run_generic_replication(const Env& env, const GainTable& table,
                                        const ExperimentConfig& cfg, const FalParams& fal_params,
                                        long rep) {
  const bool coupled = cfg.coupling == Coupling::CommonRandomNumbers;
  RngContext learner_rng(cfg.seed, rep, coupled ? 0 : 1);
  RngContext bench_rng(cfg.seed, rep, coupled ? 0 : 2);

  std::unique_ptr<Policy> learner = make_generic_policy(env, table, cfg.policy, fal_params);
  FalPolicy* fal = dynamic_cast<FalPolicy*>(learner.get());
  BenchmarkPolicy bench(env, table);

  ReplicationData data;
  data.pseudo_regret.reserve(size_t(cfg.horizon));
  for (long round = 1; round <= cfg.horizon; ++round) {
    RoundTrace ltr = run_round(*learner, env, learner_rng, round);
    RoundTrace btr = run_round(bench, env, bench_rng, round);
    data.pseudo_regret.push_back(pseudo_regret(env, ltr, btr));
    data.stop_stage.push_back(ltr.stop_stage());
    if (fal) {
      check_fal_selections(table, *fal, data.audit);
      check_fal_estimates(env, table, *fal, ltr, round, data.audit);
      if (std::find(cfg.checkpoints.begin(), cfg.checkpoints.end(), round) !=
          cfg.checkpoints.end())
        data.fal_checkpoints.push_back(fal_snapshot(env, fal->stats(), round));
    }
  }
  if (fal) {
    data.audit.final_n_action = fal->stats().n_action_flat();
  }
  return data;
}

int sample_emission(const ScreeningConfig& scfg, int modality, bool malignant, RngStream rng) {
  const auto& row = scfg.emissions[size_t(modality)][malignant ? 1 : 0];
  return rng.sample_index(std::span<const double>(row.data(), row.size()));
}

// Cohort-driven replication: rounds are synthetic patients, feedbacks come
// from the label-conditional emission tables and terminal rewards from the
// learned (or rule-based) diagnosis against the true label. The projected
// environment still supplies the benchmark trajectory and true-mean regret
// accounting.
ReplicationData run_screening_replication(const Env& env, const GainTable& table,
                                          const ExperimentConfig& cfg,
                                          const FalParams& fal_params, long rep) {
  const ScreeningConfig scfg = screening_config_from_json(cfg.env.scenario_params);
  RngContext learner_rng(cfg.seed, rep, 1);
  RngContext bench_rng(cfg.seed, rep, 2);

  std::unique_ptr<FalPolicy> fal;
  if (cfg.policy.kind == PolicyKind::Fal) {
    FalParams masked = fal_params;
    masked.mask = ActionMaskMode::OncePerRound;  // each modality at most once
    fal = std::make_unique<FalPolicy>(env, masked);
  }
  std::vector<Ucb1> cbb;
  const auto arms = composite_arms(env.num_actions());
  if (cfg.policy.kind == PolicyKind::Cbb)
    cbb.assign(4, Ucb1(int(arms.size())));
  FrequencyPredictor freq(env.num_states());
  BenchmarkPolicy bench(env, table);

  const int stop = env.stop_action();
  ReplicationData data;
  for (long round = 1; round <= cfg.horizon; ++round) {
    const Patient patient = draw_patient(scfg, learner_rng.stream(round, 0, Draw::Cohort));
    const int x0 = 1 + patient.initial_risk;  // risk states follow the initial state

    RoundTrace tr;
    tr.round_index = round;
    tr.states.push_back(x0);
    int arm_index = -1;

    if (cfg.policy.kind == PolicyKind::Fal) {
      fal->begin_round(round);
      int t = 1, x = x0;
      while (true) {
        int a = fal->select(t, x);
        if (t == env.l_max()) a = stop;
        tr.actions.push_back(a);
        if (a == stop) break;
        const int score =
            1 + sample_emission(scfg, a, patient.malignant, learner_rng.stream(round, t, Draw::Feedback));
        tr.feedbacks.push_back(score - 1);
        x = 1 + screening_risk_bucket(score);
        tr.states.push_back(x);
        ++t;
      }
    } else {
      std::vector<int> plan;
      if (cfg.policy.kind == PolicyKind::Guideline) {
        plan = guideline_plan(patient.high_density, patient.high_risk);
      } else {
        arm_index = cbb[size_t(patient.initial_risk)].select();
        plan = arms[size_t(arm_index)];
      }
      int t = 1, x = x0;
      for (int a : plan) {
        tr.actions.push_back(a);
        const int score =
            1 + sample_emission(scfg, a, patient.malignant, learner_rng.stream(round, t, Draw::Feedback));
        tr.feedbacks.push_back(score - 1);
        x = 1 + screening_risk_bucket(score);
        tr.states.push_back(x);
        ++t;
      }
      tr.actions.push_back(stop);
    }

    const int T = tr.stop_stage();
    // Terminal rewards for every visited stage: the value of having stopped
    // there under the current diagnosis rule.
    tr.realized_costs.resize(size_t(T - 1));
    tr.realized_rewards.resize(size_t(T));
    for (int t = 1; t <= T - 1; ++t)
      tr.realized_costs[size_t(t - 1)] = scfg.costs[size_t(tr.actions[size_t(t - 1)])];
    for (int t = 1; t <= T; ++t) {
      bool call_malignant;
      if (cfg.policy.kind == PolicyKind::Guideline) {
        std::vector<int> scores;
        for (int s = 0; s < t - 1; ++s) scores.push_back(tr.feedbacks[size_t(s)] + 1);
        call_malignant = threshold_predict(scores) == Diagnosis::Malignant;
      } else {
        call_malignant = freq.predict(tr.states[size_t(t - 1)]) == Diagnosis::Malignant;
      }
      tr.realized_rewards[size_t(t - 1)] =
          screening_reward(scfg, call_malignant, patient.malignant);
    }
#ifndef NDEBUG
    validate_trace(tr, env, x0);
#endif

    double utility = tr.realized_rewards[size_t(T - 1)];
    for (double c : tr.realized_costs) utility -= c;
    data.utility.push_back(utility);
    data.stop_stage.push_back(T);

    freq.observe(tr.states[size_t(T - 1)], patient.malignant);
    if (cfg.policy.kind == PolicyKind::Fal) {
      fal->observe(tr);
    } else if (cfg.policy.kind == PolicyKind::Cbb) {
      cbb[size_t(patient.initial_risk)].update(arm_index, utility);
    }

    RoundTrace btr = run_round(bench, env, bench_rng, round);
    data.pseudo_regret.push_back(pseudo_regret(env, tr, btr));
  }
  if (fal) data.audit.final_n_action = fal->stats().n_action_flat();
  return data;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.horizon < 0) throw_config("horizon must be >= 0");
  if (cfg.replications < 1) throw_config("replications must be >= 1");
  if (!cfg.seed_set) throw_config("a seed is required; wall-clock seeding is not supported");
  if (cfg.jobs < 1) throw_config("jobs must be >= 1");
  for (long cp : cfg.checkpoints)
    if (cp < 1 || cp > cfg.horizon)
      throw_config("checkpoint " + std::to_string(cp) + " outside [1, horizon]");

  ExperimentResult result;
  result.config = cfg;
  if (result.config.checkpoints.empty() && cfg.horizon > 0)
    result.config.checkpoints = {cfg.horizon};
  result.env = std::make_shared<Env>(Env::compile(resolve_env(cfg.env)));
  result.table = full_gain_table(*result.env);

  FalParams fal_params = cfg.policy.fal;
  if (cfg.policy.delta_one_over_n && cfg.horizon >= 2)
    fal_params.delta = 1.0 / double(cfg.horizon);
  result.effective_delta = fal_params.delta;

  const bool screening_mode =
      cfg.env.scenario == "screening" && (cfg.policy.kind == PolicyKind::Fal ||
                                          cfg.policy.kind == PolicyKind::Guideline ||
                                          cfg.policy.kind == PolicyKind::Cbb);
  if (!screening_mode &&
      (cfg.policy.kind == PolicyKind::Guideline || cfg.policy.kind == PolicyKind::Cbb))
    throw_config("policy requires the screening scenario's cohort simulation");

  result.replications.resize(size_t(cfg.replications));
  const ExperimentConfig& final_cfg = result.config;
  auto run_one = [&](long rep) {
    return screening_mode
               ? run_screening_replication(*result.env, result.table, final_cfg, fal_params, rep)
               : run_generic_replication(*result.env, result.table, final_cfg, fal_params, rep);
  };

  const int jobs = std::min<long>(cfg.jobs, cfg.replications);
  if (jobs <= 1) {
    for (int rep = 0; rep < cfg.replications; ++rep)
      result.replications[size_t(rep)] = run_one(rep);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (int rep = next.fetch_add(1); rep < cfg.replications; rep = next.fetch_add(1))
            result.replications[size_t(rep)] = run_one(rep);
        } catch (...) {
          errors[size_t(w)] = std::current_exception();
        }
      });
    }
    for (auto& worker : workers) worker.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }
  return result;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string experiment_csv(const ExperimentResult& result) {
  std::string out = "replication,round,stop_stage,pseudo_regret,cumulative_regret\n";
  for (size_t rep = 0; rep < result.replications.size(); ++rep) {
    const auto& data = result.replications[rep];
    double cumulative = 0.0;
    for (size_t round = 0; round < data.pseudo_regret.size(); ++round) {
      cumulative += data.pseudo_regret[round];
      out += std::to_string(rep + 1);
      out += ',';
      out += std::to_string(round + 1);
      out += ',';
      out += std::to_string(data.stop_stage[round]);
      out += ',';
      append_number(out, data.pseudo_regret[round]);
      out += ',';
      append_number(out, cumulative);
      out += '\n';
    }
  }
  return out;
}

ordered_json experiment_summary(const ExperimentResult& result) {
  const ExperimentConfig& cfg = result.config;
  ordered_json out;
  out["horizon"] = cfg.horizon;
  out["replications"] = cfg.replications;
  out["seed"] = cfg.seed;
  out["coupling"] =
      cfg.coupling == Coupling::Independent ? "independent" : "common-random-numbers";
  switch (cfg.policy.kind) {
    case PolicyKind::Benchmark: out["policy"] = "benchmark"; break;
    case PolicyKind::Fal: out["policy"] = "fal"; break;
    case PolicyKind::Fixed: out["policy"] = "fixed"; break;
    case PolicyKind::Guideline: out["policy"] = "guideline"; break;
    case PolicyKind::Cbb: out["policy"] = "cbb"; break;
  }

  std::vector<std::vector<double>> curves;
  curves.reserve(result.replications.size());
  for (const auto& data : result.replications) curves.push_back(data.pseudo_regret);

  ordered_json checkpoints = ordered_json::array();
  if (cfg.horizon > 0 && result.replications.size() >= 2) {
    for (const auto& point : expected_regret(curves, cfg.checkpoints)) {
      ordered_json row;
      row["round"] = point.round;
      row["mean_cumulative_regret"] = point.mean;
      row["stddev"] = point.stddev;
      row["stderr"] = point.stderr_mean;
      checkpoints.push_back(std::move(row));
    }
  } else if (cfg.horizon > 0 && !result.replications.empty()) {
    for (long cp : cfg.checkpoints) {
      double cumulative = 0.0;
      for (long j = 0; j < cp; ++j) cumulative += result.replications[0].pseudo_regret[size_t(j)];
      ordered_json row;
      row["round"] = cp;
      row["mean_cumulative_regret"] = cumulative;
      checkpoints.push_back(std::move(row));
    }
  }
  out["checkpoints"] = std::move(checkpoints);

  const bool is_fal = cfg.policy.kind == PolicyKind::Fal;
  const double sigma = is_fal ? cfg.policy.fal.sigma : result.env->noise().sigma;
  std::optional<long> horizon_for_bounds;
  if (cfg.horizon >= 2) horizon_for_bounds = cfg.horizon;
  std::optional<double> delta_for_bounds;
  if (is_fal) delta_for_bounds = result.effective_delta;
  out["bounds"] =
      bound_report_to_json(*result.env, theorem_bounds(*result.env, result.table, sigma,
                                                       delta_for_bounds, horizon_for_bounds));

  if (is_fal && cfg.env.scenario != "screening") {
    std::vector<FalRunAudit> audits;
    for (const auto& data : result.replications) audits.push_back(data.audit);
    FalParams audited = cfg.policy.fal;
    audited.delta = result.effective_delta;
    out["confidence_audit"] =
        audit_summary_to_json(confidence_audit(audits, *result.env, result.table, audited));
    ordered_json snapshots = ordered_json::array();
    for (size_t rep = 0; rep < result.replications.size(); ++rep) {
      if (result.replications[rep].fal_checkpoints.empty()) continue;
      ordered_json entry;
      entry["replication"] = rep + 1;
      entry["snapshots"] = result.replications[rep].fal_checkpoints;
      snapshots.push_back(std::move(entry));
    }
    if (!snapshots.empty()) out["fal_snapshots"] = std::move(snapshots);
  }

  if (!result.replications.empty() && !result.replications.front().utility.empty()) {
    double total = 0.0, tail_total = 0.0;
    long count = 0, tail_count = 0;
    const long tail_start =
        cfg.horizon - long(std::ceil(double(cfg.horizon) * kUtilityTailFraction));
    for (const auto& data : result.replications) {
      for (size_t round = 0; round < data.utility.size(); ++round) {
        total += data.utility[round];
        ++count;
        if (long(round) >= tail_start) {
          tail_total += data.utility[round];
          ++tail_count;
        }
      }
    }
    ordered_json utility;
    utility["mean"] = total / double(std::max(count, 1L));
    utility["converged_mean"] = tail_total / double(std::max(tail_count, 1L));
    utility["tail_fraction"] = kUtilityTailFraction;
    out["average_utility"] = std::move(utility);
  }
  return out;
}

}  // namespace smab
