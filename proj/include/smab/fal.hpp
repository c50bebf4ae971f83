#pragma once

#include <limits>
#include <vector>

#include "smab/policy.hpp"

namespace smab {

enum class ActionMaskMode { None, OncePerRound };

// Knobs of the feedback-adaptive learner. K is always derived from the
// environment (stages x states x actions-plus-stop), never stored.
struct FalParams {
  double delta = 0.1;
  double sigma = 1.0;
  double epsilon_stop_bias = 0.0;
  ActionMaskMode mask = ActionMaskMode::None;
};

// Visit counters and running sample means per stage-state (terminal rewards)
// and stage-state-action (gains). The stop action's gain estimate is an
// alias of the state's reward estimate and is never stored separately; the
// stop slot of the action counters still counts stop selections.
class FalStats {
 public:
  FalStats(int l_max, int num_states, int num_actions);

  long n_state(int t, int x) const { return n_state_[sx(t, x)]; }
  long n_action(int t, int x, int a) const { return n_action_[sxa(t, x, a)]; }
  double r_hat(int t, int x) const { return r_hat_[sx(t, x)]; }
  double g_hat(int t, int x, int a) const {
    return a == A_ ? r_hat_[sx(t, x)] : g_hat_[sxa(t, x, a)];
  }

  void absorb_reward(int t, int x, double value);
  void absorb_gain(int t, int x, int a, double value);
  void record_stop(int t, int x) { ++n_action_[sxa(t, x, A_)]; }

  int l_max() const { return L_; }
  int num_states() const { return S_; }
  int num_actions() const { return A_; }
  const std::vector<long>& n_action_flat() const { return n_action_; }
  const std::vector<long>& n_state_flat() const { return n_state_; }

 private:
  size_t sx(int t, int x) const { return size_t(t - 1) * S_ + size_t(x); }
  size_t sxa(int t, int x, int a) const { return sx(t, x) * (A_ + 1) + size_t(a); }

  int L_, S_, A_;
  std::vector<long> n_state_, n_action_;
  std::vector<double> r_hat_, g_hat_;
};

// Confidence number for a counter: sqrt((1+N)/N^2 * 4 sigma^2 *
// log(K sqrt(1+N) / delta)). A zero counter means unexplored and yields
// +infinity.
double fal_confidence(long count, long K, double sigma, double delta);

// Confidence number for the triplet: continuation actions use their own
// counter, the stop action uses the state-visit counter.
double fal_confidence(const FalStats& stats, const FalParams& params, long K, int t, int x,
                      int a_or_stop);

struct FalChoice {
  int action = 0;
  double conf = 0.0;  // confidence number of the chosen entry
  double ucb = 0.0;
};

// One selection step: upper-confidence values over the eligible continuation
// actions plus stop (with optional positive stop bias). Stop wins every tie
// it participates in, including the all-infinite fresh-state tie; remaining
// ties break by declared action order. `used_mask`, when given, removes
// already-used continuation actions for once-per-round operation.
FalChoice fal_action(const Env& env, const FalStats& stats, const FalParams& params, int t,
                     int x, const std::vector<uint8_t>* used_mask = nullptr);

// Absorbs one completed round: every visited stage-state updates the reward
// mean and visit counter, every continuation stage updates the gain mean with
// next-stage reward minus this stage's cost, and the final stage's stop
// counter increments.
void fal_update(FalStats& stats, const RoundTrace& trace);

class FalPolicy final : public Policy {
 public:
  struct SelectionRecord {
    int t, x, action;
    double conf;
  };

  FalPolicy(const Env& env, FalParams params);

  void begin_round(long round_index) override;
  int select(int t, int x) override;
  void observe(const RoundTrace& trace) override { fal_update(stats_, trace); }

  const FalStats& stats() const { return stats_; }
  const FalParams& params() const { return params_; }
  long K() const { return K_; }
  const std::vector<SelectionRecord>& last_round_selections() const { return selections_; }

 private:
  const Env* env_;
  FalParams params_;
  long K_;
  FalStats stats_;
  std::vector<uint8_t> used_;
  std::vector<SelectionRecord> selections_;
};

}  // namespace smab
