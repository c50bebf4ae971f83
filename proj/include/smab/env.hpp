#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smab/error.hpp"
#include "smab/types.hpp"

namespace smab {

// Validated, index-compiled environment. Stages are 1-based; states,
// continuation actions and feedbacks are dense indices in declaration order;
// the implicit stop action is index num_actions(). Immutable after
// construction and safe to share across concurrent simulation workers.
class Env {
 public:
  // Checks every invariant of the document and compiles the lookup tables.
  // Throws Error{Validation} describing the first violated invariant and its
  // location.
  static Env compile(EnvSpec spec);

  const EnvSpec& spec() const { return spec_; }
  int l_max() const { return spec_.l_max; }
  int num_states() const { return S_; }
  int num_actions() const { return A_; }
  int num_feedbacks() const { return F_; }
  int stop_action() const { return A_; }
  int initial_state() const { return x0_; }
  // Count of (stage, state, action-or-stop) triplets.
  long K() const { return long(spec_.l_max) * S_ * (A_ + 1); }

  const std::string& state_name(int x) const { return spec_.states[size_t(x)]; }
  const std::string& action_name(int a) const;  // stop index -> "stop"
  const std::string& feedback_name(int f) const { return spec_.feedbacks[size_t(f)]; }
  int state_index(const std::string& name) const;    // -1 when unknown
  int action_index(const std::string& name) const;   // -1 when unknown
  int feedback_index(const std::string& name) const; // -1 when unknown

  bool has_feedback_dist(int t, int x, int a) const;
  std::span<const double> feedback_dist(int t, int x, int a) const;
  // Deterministic state-mapping lookup; -1 when the entry is absent.
  int transition(int t, int x, int a, int f) const;
  bool has_cost(int t, int x, int a) const;
  double cost_mean(int t, int x, int a) const;
  bool has_reward(int t, int x) const;
  double reward_mean(int t, int x) const;
  const NoiseModel& noise() const { return spec_.noise; }

  // Continuation actions that are fully playable at (t, x): declared
  // distribution and cost, and every positive-probability feedback has a
  // transition whose target carries a next-stage reward.
  const std::vector<int>& defined_actions(int t, int x) const;

  // (t, x) pairs reachable from (1, initial state) under any declared action.
  bool reachable(int t, int x) const;
  std::vector<std::pair<int, int>> reachable_pairs() const;

  size_t sx(int t, int x) const { return size_t(t - 1) * S_ + size_t(x); }

 private:
  size_t txa(int t, int x, int a) const {
    return (size_t(t - 1) * S_ + size_t(x)) * A_ + size_t(a);
  }

  EnvSpec spec_;
  int S_ = 0, A_ = 0, F_ = 0, x0_ = -1;
  std::vector<double> fdist_;        // (t<l_max, x, a) blocks of F
  std::vector<uint8_t> fpresent_;    // (t<l_max, x, a)
  std::vector<int> smap_;            // (t<l_max, x, a) blocks of F, -1 absent
  std::vector<double> cost_;         // (t<l_max, x, a), NaN absent
  std::vector<double> reward_;       // (t, x), NaN absent
  std::vector<uint8_t> reach_;       // (t, x)
  std::vector<std::vector<int>> defined_;  // per (t, x)
};

// Returns the document unchanged when every invariant holds; otherwise throws
// Error{Validation} naming the first violation.
EnvSpec validate_spec(EnvSpec spec);

}  // namespace smab
