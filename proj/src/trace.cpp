#include "smab/trace.hpp"

namespace smab {

void validate_trace(const RoundTrace& trace, const Env& env, int initial_state) {
  const int T = trace.stop_stage();
  if (T < 1 || T > env.l_max()) throw_contract("trace stop stage out of [1, l_max]");
  if (int(trace.states.size()) != T) throw_contract("trace state sequence length mismatch");
  if (int(trace.feedbacks.size()) != T - 1)
    throw_contract("trace feedback sequence length mismatch");
  if (trace.states[0] != initial_state)
    throw_contract("trace does not start at the round's initial state");
  const int stop = env.stop_action();
  if (trace.actions.back() != stop) throw_contract("trace does not end with the stop action");
  for (int t = 1; t < T; ++t) {
    if (trace.actions[t - 1] == stop) throw_contract("stop action before the final stage");
    int next = env.transition(t, trace.states[t - 1], trace.actions[t - 1],
                              trace.feedbacks[t - 1]);
    if (next != trace.states[t]) throw_contract("trace state sequence violates the state mapping");
  }
  if (!trace.realized_costs.empty() && int(trace.realized_costs.size()) != T - 1)
    throw_contract("trace realized cost length mismatch");
  if (!trace.realized_rewards.empty() && int(trace.realized_rewards.size()) != T)
    throw_contract("trace realized reward length mismatch");
}

}  // namespace smab
