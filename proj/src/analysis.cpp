#include "smab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smab/log.hpp"

namespace smab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void compute_values(const Env& env, GainTable& tab) {
  const int L = tab.l_max;
  const int stop = env.stop_action();
  std::vector<double> worst(size_t(L) * tab.S, std::numeric_limits<double>::quiet_NaN());

  for (int t = L; t >= 1; --t) {
    for (int x = 0; x < tab.S; ++x) {
      const size_t i = tab.sx(t, x);
      if (!tab.state_defined[i]) continue;
      const double r = env.reward_mean(t, x);

      if (t == L || tab.is_optimal(t, x, stop)) {
        tab.mu_star[i] = r;
      } else {
        double best = -kInf;
        for (int a : tab.optimal_set[i]) {
          if (a == stop) continue;
          double v = -env.cost_mean(t, x, a);
          auto probs = env.feedback_dist(t, x, a);
          for (int f = 0; f < env.num_feedbacks(); ++f) {
            if (probs[f] <= 0.0) continue;
            v += probs[f] * tab.mu_star[tab.sx(t + 1, env.transition(t, x, a, f))];
          }
          best = std::max(best, v);
        }
        tab.mu_star[i] = best;
      }

      double w = r;  // stopping immediately is always available
      tab.mu_lower[tab.sxa(t, x, stop)] = r;
      if (t < L) {
        for (int a : env.defined_actions(t, x)) {
          double v = -env.cost_mean(t, x, a);
          auto probs = env.feedback_dist(t, x, a);
          for (int f = 0; f < env.num_feedbacks(); ++f) {
            if (probs[f] <= 0.0) continue;
            v += probs[f] * worst[tab.sx(t + 1, env.transition(t, x, a, f))];
          }
          tab.mu_lower[tab.sxa(t, x, a)] = v;
          w = std::min(w, v);
        }
      }
      worst[i] = w;

      for (int a = 0; a <= tab.A; ++a) {
        const size_t j = tab.sxa(t, x, a);
        if (tab.action_defined[j]) tab.omega[j] = tab.mu_star[i] - tab.mu_lower[j];
      }
    }
  }
}

GainTable full_gain_table(const Env& env) {
  GainTable tab = compute_gain_table(env);
  compute_values(env, tab);
  return tab;
}

double trace_gain_true_means(const Env& env, const RoundTrace& trace) {
  const int T = trace.stop_stage();
  double gain = env.reward_mean(T, trace.states[size_t(T - 1)]);
  for (int t = 1; t <= T - 1; ++t)
    gain -= env.cost_mean(t, trace.states[size_t(t - 1)], trace.actions[size_t(t - 1)]);
  return gain;
}

double pseudo_regret(const Env& env, const RoundTrace& learner, const RoundTrace& benchmark) {
  return trace_gain_true_means(env, benchmark) - trace_gain_true_means(env, learner);
}

std::vector<RegretCurvePoint> expected_regret(
    const std::vector<std::vector<double>>& per_round_regret,
    const std::vector<long>& checkpoints) {
  const size_t reps = per_round_regret.size();
  if (reps < 2) throw_config("expected_regret requires at least 2 replications");
  std::vector<RegretCurvePoint> out;
  for (long cp : checkpoints) {
    std::vector<double> cum(reps, 0.0);
    for (size_t r = 0; r < reps; ++r) {
      const auto& curve = per_round_regret[r];
      if (cp > long(curve.size()))
        throw_config("checkpoint " + std::to_string(cp) + " exceeds the horizon");
      for (long j = 0; j < cp; ++j) cum[r] += curve[size_t(j)];
    }
    double mean = 0.0;
    for (double v : cum) mean += v;
    mean /= double(reps);
    double var = 0.0;
    for (double v : cum) var += (v - mean) * (v - mean);
    var /= double(reps - 1);
    RegretCurvePoint p;
    p.round = cp;
    p.mean = mean;
    p.stddev = std::sqrt(var);
    p.stderr_mean = p.stddev / std::sqrt(double(reps));
    out.push_back(p);
  }
  return out;
}

double lemma2_count_bound(double delta_gap, double sigma, double K, double delta) {
  if (delta_gap <= 0.0) return kInf;
  if (sigma == 0.0) return 3.0;
  const double gap2 = delta_gap * delta_gap;
  const double s2 = 16.0 * sigma * sigma;
  return 3.0 + s2 / gap2 * std::log(s2 * K / (gap2 * delta));
}

BoundReport theorem_bounds(const Env& env, const GainTable& tab, double sigma,
                           std::optional<double> delta, std::optional<long> horizon) {
  if (delta && !(*delta > 0.0 && *delta < 1.0))
    throw_config("bound delta must be in (0, 1)");
  if (horizon && *horizon < 1) throw_config("bound horizon must be >= 1");

  BoundReport report;
  report.sigma = sigma;
  report.delta = delta;
  report.horizon = horizon;
  report.K = env.K();
  const int stop = env.stop_action();
  const double Kd = double(report.K);

  double omega_max = 0.0;
  double sum_thm1 = 0.0, sum_thm2 = 0.0, sum_cor2 = 0.0;
  for (int t = 1; t <= tab.l_max; ++t) {
    for (int x = 0; x < tab.S; ++x) {
      const size_t i = tab.sx(t, x);
      if (!tab.state_defined[i]) continue;
      if (tab.is_optimal(t, x, stop) && tab.optimal_set[i].size() > 1)
        report.assumption2_satisfied = false;
      for (int a = 0; a <= tab.A; ++a) {
        const size_t j = tab.sxa(t, x, a);
        if (!tab.action_defined[j]) continue;
        omega_max = std::max(omega_max, tab.omega[j]);
        if (tab.is_optimal(t, x, a)) continue;
        const double gap = tab.delta[j];
        const double omega = tab.omega[j];
        if (omega > double(tab.l_max - t) * gap + 1e-12) report.assumption3_satisfied = false;
        BoundReport::Triplet row{t, x, a, gap, omega, 0.0};
        if (delta) {
          row.count_cap = lemma2_count_bound(gap, sigma, Kd, *delta);
          sum_thm1 += omega * row.count_cap;
        }
        if (horizon) {
          const double cap_n = lemma2_count_bound(gap, sigma, Kd, 1.0 / double(*horizon));
          if (!delta) row.count_cap = cap_n;
          sum_thm2 += omega * cap_n;
          const double log_term =
              sigma == 0.0
                  ? 0.0
                  : (16.0 * sigma * sigma / gap) *
                        std::log(16.0 * sigma * sigma * Kd * double(*horizon) / (gap * gap));
          sum_cor2 += 3.0 * gap + log_term;
        }
        report.suboptimal.push_back(row);
      }
    }
  }
  report.omega_max = omega_max;
  if (delta) report.thm1_total = sum_thm1;
  if (horizon) {
    report.thm2_total = omega_max + sum_thm2;
    const double lm = double(tab.l_max);
    report.cor2_total = omega_max + (lm * lm - lm) / 2.0 * sum_cor2;
  }
  if (!report.assumption2_satisfied)
    log::warn(
        "a stage-state pair has both stop and a continuation action optimal; regret bounds "
        "reported with assumption2_satisfied=false (consider a positive stop bias)");
  return report;
}

nlohmann::ordered_json bound_report_to_json(const Env& env, const BoundReport& report) {
  nlohmann::ordered_json out;
  out["sigma"] = report.sigma;
  if (report.delta) out["delta"] = *report.delta;
  if (report.horizon) out["n"] = *report.horizon;
  out["K"] = report.K;
  out["omega_max"] = report.omega_max;
  out["assumption2_satisfied"] = report.assumption2_satisfied;
  out["assumption3_satisfied"] = report.assumption3_satisfied;
  if (report.thm1_total) out["thm1_total"] = *report.thm1_total;
  if (report.thm2_total) out["thm2_total"] = *report.thm2_total;
  if (report.cor2_total) out["cor2_total"] = *report.cor2_total;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : report.suboptimal) {
    nlohmann::ordered_json r;
    r["t"] = row.t;
    r["state"] = env.state_name(row.x);
    r["action"] = env.action_name(row.a);
    r["delta_gap"] = row.delta_gap;
    r["omega"] = row.omega;
    r["count_cap"] = std::isinf(row.count_cap) ? nlohmann::ordered_json()
                                               : nlohmann::ordered_json(row.count_cap);
    rows.push_back(std::move(r));
  }
  out["suboptimal_triplets"] = std::move(rows);
  return out;
}

AuditSummary confidence_audit(const std::vector<FalRunAudit>& audits, const Env& env,
                              const GainTable& tab, const FalParams& params) {
  AuditSummary s;
  s.replications = int(audits.size());
  s.delta = params.delta;
  if (audits.empty()) return s;

  const double Kd = double(env.K());
  for (const auto& audit : audits) {
    if (audit.econf_violated) ++s.econf_violating;
    if (audit.cor1_violated) ++s.cor1_violating;
    if (audit.econf_violated || audit.final_n_action.empty()) continue;
    s.lemma2_checked = true;
    ++s.lemma2_replications;
    for (int t = 1; t <= tab.l_max; ++t) {
      for (int x = 0; x < tab.S; ++x) {
        for (int a = 0; a <= tab.A; ++a) {
          const size_t j = tab.sxa(t, x, a);
          if (!tab.action_defined[j] || tab.is_optimal(t, x, a)) continue;
          const double cap = lemma2_count_bound(tab.delta[j], params.sigma, Kd, params.delta);
          if (double(audit.final_n_action[j]) > cap) s.lemma2_all_held = false;
        }
      }
    }
  }
  s.econf_fraction = double(s.econf_violating) / double(s.replications);
  s.cor1_fraction = double(s.cor1_violating) / double(s.replications);
  s.binomial_slack = 3.0 * std::sqrt(params.delta * (1.0 - params.delta) /
                                     double(s.replications));
  return s;
}

nlohmann::ordered_json audit_summary_to_json(const AuditSummary& s) {
  nlohmann::ordered_json out;
  out["replications"] = s.replications;
  out["delta"] = s.delta;
  out["econf_violating_replications"] = s.econf_violating;
  out["econf_violation_fraction"] = s.econf_fraction;
  out["binomial_slack"] = s.binomial_slack;
  out["econf_bound_with_slack"] = s.delta + s.binomial_slack;
  out["cor1_violating_replications"] = s.cor1_violating;
  out["cor1_violation_fraction"] = s.cor1_fraction;
  out["lemma2_checked"] = s.lemma2_checked;
  if (s.lemma2_checked) {
    out["lemma2_replications"] = s.lemma2_replications;
    out["lemma2_all_held"] = s.lemma2_all_held;
  }
  return out;
}

namespace {

// Depth-first walk over sequence prefixes carrying the state distribution.
struct FixedSeqWalker {
  const Env& env;
  std::vector<FixedSequenceValue> out;
  std::vector<int> prefix;

  void visit(int t, const std::vector<double>& dist, double cost_so_far) {
    // Stopping now is itself a sequence; requires a reward at every support state.
    double value = cost_so_far;
    bool stoppable = true;
    for (int x = 0; x < env.num_states() && stoppable; ++x) {
      if (dist[size_t(x)] <= 0.0) continue;
      if (!env.has_reward(t, x))
        stoppable = false;
      else
        value += dist[size_t(x)] * env.reward_mean(t, x);
    }
    if (stoppable) out.push_back({prefix, value});
    if (t >= env.l_max()) return;

    for (int a = 0; a < env.num_actions(); ++a) {
      bool executable = true;
      std::vector<double> next(size_t(env.num_states()), 0.0);
      double cost = cost_so_far;
      for (int x = 0; x < env.num_states() && executable; ++x) {
        const double px = dist[size_t(x)];
        if (px <= 0.0) continue;
        if (!env.has_feedback_dist(t, x, a) || !env.has_cost(t, x, a)) {
          executable = false;
          break;
        }
        cost -= px * env.cost_mean(t, x, a);
        auto probs = env.feedback_dist(t, x, a);
        for (int f = 0; f < env.num_feedbacks(); ++f) {
          if (probs[f] <= 0.0) continue;
          int y = env.transition(t, x, a, f);
          if (y < 0) {
            executable = false;
            break;
          }
          next[size_t(y)] += px * probs[f];
        }
      }
      if (!executable) continue;
      prefix.push_back(a);
      visit(t + 1, next, cost);
      prefix.pop_back();
    }
  }
};

}  // namespace

std::vector<FixedSequenceValue> enumerate_fixed_sequences(const Env& env, long max_sequences) {
  double count = 0.0;
  double level = 1.0;
  for (int len = 0; len <= env.l_max() - 1; ++len) {
    count += level;
    level *= double(env.num_actions());
  }
  if (count > double(max_sequences))
    throw_config("refusing to enumerate " + std::to_string((long long)count) +
                 " fixed sequences (guard " + std::to_string(max_sequences) + ")");

  FixedSeqWalker walker{env, {}, {}};
  std::vector<double> dist(size_t(env.num_states()), 0.0);
  dist[size_t(env.initial_state())] = 1.0;
  walker.visit(1, dist, 0.0);
  std::stable_sort(walker.out.begin(), walker.out.end(),
                   [](const FixedSequenceValue& a, const FixedSequenceValue& b) {
                     return a.expected_gain > b.expected_gain;
                   });
  return walker.out;
}

}  // namespace smab
