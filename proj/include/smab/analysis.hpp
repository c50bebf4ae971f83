#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "smab/fal.hpp"
#include "smab/gain_table.hpp"
#include "smab/trace.hpp"

namespace smab {

// Fills mu_star, mu_lower and omega by backward induction. mu_star follows
// the greedy rule from (t, x); when several continuation actions tie for the
// best gain the one with the larger continuation value is used. mu_lower of
// an action is the expected gain of taking it and then always making the
// worst available choice (stop included) at every later stage.
void compute_values(const Env& env, GainTable& table);

// compute_gain_table + compute_values in one step.
GainTable full_gain_table(const Env& env);

// Terminal reward at the stop state minus the costs of the continuation
// stages, all evaluated at the true means along the realized trajectory.
double trace_gain_true_means(const Env& env, const RoundTrace& trace);

// Per-round regret sample: the benchmark trajectory's true-mean gain minus
// the learner trajectory's true-mean gain.
double pseudo_regret(const Env& env, const RoundTrace& learner, const RoundTrace& benchmark);

struct RegretCurvePoint {
  long round = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double stderr_mean = 0.0;
};

// Monte-Carlo mean and standard error of cumulative regret at each checkpoint
// across replications (at least 2 required). Each curve holds the per-round
// regret samples of one replication.
std::vector<RegretCurvePoint> expected_regret(
    const std::vector<std::vector<double>>& per_round_regret,
    const std::vector<long>& checkpoints);

// Closed-form cap on how often a suboptimal triplet can be selected while the
// confidence event holds: 3 + (16 sigma^2 / gap^2) log(16 sigma^2 K / (gap^2
// delta)). A zero gap is uncapped (+infinity).
double lemma2_count_bound(double delta_gap, double sigma, double K, double delta);

struct BoundReport {
  double sigma = 0.0;
  std::optional<double> delta;  // for the fixed-confidence total
  std::optional<long> horizon;  // for the horizon-tuned totals
  long K = 0;
  double omega_max = 0.0;
  bool assumption2_satisfied = true;  // no state mixes stop with another optimal action
  bool assumption3_satisfied = true;  // omega <= (l_max - t) * gap on the suboptimal grid
  std::optional<double> thm1_total;   // sum of omega * count cap at delta
  std::optional<double> thm2_total;   // omega_max + same sum with delta = 1/n
  std::optional<double> cor2_total;   // early-deviation form, valid under assumption 3
  struct Triplet {
    int t = 0, x = 0, a = 0;
    double delta_gap = 0.0;
    double omega = 0.0;
    double count_cap = 0.0;  // at `delta` when given, else at 1/horizon
  };
  std::vector<Triplet> suboptimal;
};

// Evaluates the regret bounds over the suboptimal (t, x, a) grid. Requires a
// table completed by compute_values. Assumption violations never abort: the
// flags are reported and a warning is logged.
BoundReport theorem_bounds(const Env& env, const GainTable& table, double sigma,
                           std::optional<double> delta, std::optional<long> horizon);

nlohmann::ordered_json bound_report_to_json(const Env& env, const BoundReport& report);

// Per-replication audit flags collected while a learner run is driven.
struct FalRunAudit {
  bool econf_violated = false;
  long econf_first_round = -1;
  bool cor1_violated = false;
  long cor1_violations = 0;
  std::vector<long> final_n_action;  // (t, x, a) incl. stop slot
};

struct AuditSummary {
  int replications = 0;
  double delta = 0.0;
  int econf_violating = 0;
  double econf_fraction = 0.0;
  double binomial_slack = 0.0;  // 3 sqrt(delta (1-delta) / replications)
  int cor1_violating = 0;
  double cor1_fraction = 0.0;
  bool lemma2_checked = false;
  bool lemma2_all_held = true;  // over replications where the confidence event held
  long lemma2_replications = 0;
};

// Aggregates confidence-event and selection-confidence violations across
// replications, and checks the count caps on every replication where the
// confidence event held.
AuditSummary confidence_audit(const std::vector<FalRunAudit>& audits, const Env& env,
                              const GainTable& table, const FalParams& params);

nlohmann::ordered_json audit_summary_to_json(const AuditSummary& summary);

struct FixedSequenceValue {
  std::vector<int> actions;
  double expected_gain = 0.0;
};

// Exact expected gain of every fixed (non-adaptive) continuation sequence by
// forward probability propagation, sorted by gain descending. Sequences that
// reach a state where the next planned action is not declared are dropped.
// Refuses when the sequence count exceeds the guard.
std::vector<FixedSequenceValue> enumerate_fixed_sequences(const Env& env,
                                                          long max_sequences = 1000000);

}  // namespace smab
