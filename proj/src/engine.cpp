#include "smab/engine.hpp"

namespace smab {

namespace {

std::string triplet(const Env& env, int t, int x, int a) {
  return "(t=" + std::to_string(t) + ", x=" + env.state_name(x) +
         ", a=" + env.action_name(a) + ")";
}

}  // namespace

int sample_feedback(const Env& env, int t, int x, int a, RngStream& rng) {
  if (!env.has_feedback_dist(t, x, a))
    throw_config("missing feedback distribution entry at " + triplet(env, t, x, a));
  return rng.sample_index(env.feedback_dist(t, x, a));
}

int transition(const Env& env, int t, int x, int a, int f) {
  int next = env.transition(t, x, a, f);
  if (next < 0)
    throw_config("missing state_map entry at " + triplet(env, t, x, a) + " feedback " +
                 env.feedback_name(f));
  return next;
}

void realize_outcomes(RoundTrace& trace, const Env& env, const RngContext& rng) {
  const int T = trace.stop_stage();
  trace.realized_costs.resize(size_t(T - 1));
  trace.realized_rewards.resize(size_t(T));
  for (int t = 1; t <= T - 1; ++t) {
    const int x = trace.states[size_t(t - 1)];
    const int a = trace.actions[size_t(t - 1)];
    if (!env.has_cost(t, x, a))
      throw_config("missing cost_mean entry at " + triplet(env, t, x, a));
    RngStream s = rng.stream(trace.round_index, t, Draw::CostNoise);
    trace.realized_costs[size_t(t - 1)] = env.cost_mean(t, x, a) + s.sample_noise(env.noise());
  }
  for (int t = 1; t <= T; ++t) {
    const int x = trace.states[size_t(t - 1)];
    if (!env.has_reward(t, x))
      throw_config("missing reward_mean entry at (t=" + std::to_string(t) +
                   ", x=" + env.state_name(x) + ")");
    RngStream s = rng.stream(trace.round_index, t, Draw::RewardNoise);
    trace.realized_rewards[size_t(t - 1)] = env.reward_mean(t, x) + s.sample_noise(env.noise());
  }
}

RoundTrace run_round(Policy& policy, const Env& env, const RngContext& rng, long round_index) {
  RoundTrace trace;
  trace.round_index = round_index;
  const int stop = env.stop_action();
  policy.begin_round(round_index);

  int t = 1;
  int x = env.initial_state();
  trace.states.push_back(x);
  while (true) {
    int a = policy.select(t, x);
    if (t == env.l_max()) a = stop;  // forced termination
    if (a < 0 || a > stop)
      throw_contract("policy returned an invalid action index at stage " + std::to_string(t));
    trace.actions.push_back(a);
    if (a == stop) break;
    if (!env.has_feedback_dist(t, x, a))
      throw_contract("policy selected undeclared action at " + triplet(env, t, x, a));
    RngStream s = rng.stream(round_index, t, Draw::Feedback);
    int f = sample_feedback(env, t, x, a, s);
    trace.feedbacks.push_back(f);
    x = transition(env, t, x, a, f);
    trace.states.push_back(x);
    ++t;
  }

  realize_outcomes(trace, env, rng);
#ifndef NDEBUG
  validate_trace(trace, env, env.initial_state());
#endif
  policy.observe(trace);
  return trace;
}

}  // namespace smab
