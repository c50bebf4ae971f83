#pragma once

#include <vector>

#include "smab/env.hpp"

namespace smab {

// One round as executed: the action sequence ends with the stop action and
// states/feedbacks are consistent with the state mapping. Realized costs
// cover stages [1, T-1] and realized terminal rewards cover [1, T], both
// revealed only after the stop action.
struct RoundTrace {
  long round_index = 0;
  std::vector<int> actions;
  std::vector<int> feedbacks;
  std::vector<int> states;
  std::vector<double> realized_costs;
  std::vector<double> realized_rewards;

  int stop_stage() const { return int(actions.size()); }
};

// Throws Error{Contract} when a structural invariant is broken. Checked on
// every round in debug builds.
void validate_trace(const RoundTrace& trace, const Env& env, int initial_state);

}  // namespace smab
