#pragma once

#include "smab/env.hpp"
#include "smab/policy.hpp"
#include "smab/rng.hpp"
#include "smab/trace.hpp"

namespace smab {

enum class Draw : uint64_t { Feedback = 1, CostNoise = 2, RewardNoise = 3, Cohort = 4 };

// Addresses the substream tree for one replication of one agent. Coupled
// agents are constructed with the same agent id so every per-(round, stage)
// draw consumes identical variates; independent agents get disjoint ids.
class RngContext {
 public:
  RngContext(uint64_t seed, long replication, int agent)
      : root_(RngStream(seed).derive(uint64_t(replication))), agent_(agent) {}

  RngStream stream(long round, int stage, Draw purpose) const {
    return root_.derive(uint64_t(round), uint64_t(stage),
                        uint64_t(purpose) + 16ULL * uint64_t(agent_));
  }

 private:
  RngStream root_;
  int agent_;
};

// Draws a feedback from the declared distribution at (t, x, a).
// Missing entry -> Error{Config} naming the triplet.
int sample_feedback(const Env& env, int t, int x, int a, RngStream& rng);

// Deterministic state-mapping lookup; missing entry -> Error{Config}.
int transition(const Env& env, int t, int x, int a, int f);

// Reveals the noisy costs of stages [1, T-1] and terminal rewards of stages
// [1, T] for a trace whose action/state sequences are complete. Noise draws
// are independent across stages and rounds.
void realize_outcomes(RoundTrace& trace, const Env& env, const RngContext& rng);

// Plays one round: queries the policy per stage (stop is forced at l_max
// regardless of the policy's output), samples feedbacks, applies the state
// mapping, realizes outcomes, and delivers the trace to the policy's observe
// hook before returning it.
RoundTrace run_round(Policy& policy, const Env& env, const RngContext& rng, long round_index);

}  // namespace smab
