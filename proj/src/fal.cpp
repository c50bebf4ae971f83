#include "smab/fal.hpp"

#include <cmath>

namespace smab {

FalStats::FalStats(int l_max, int num_states, int num_actions)
    : L_(l_max), S_(num_states), A_(num_actions) {
  const size_t ls = size_t(L_) * S_;
  n_state_.assign(ls, 0);
  r_hat_.assign(ls, 0.0);
  n_action_.assign(ls * (A_ + 1), 0);
  g_hat_.assign(ls * (A_ + 1), 0.0);
}

void FalStats::absorb_reward(int t, int x, double value) {
  const size_t i = sx(t, x);
  const double n = double(n_state_[i]);
  r_hat_[i] = (n * r_hat_[i] + value) / (n + 1.0);
  ++n_state_[i];
}

void FalStats::absorb_gain(int t, int x, int a, double value) {
  const size_t i = sxa(t, x, a);
  const double n = double(n_action_[i]);
  g_hat_[i] = (n * g_hat_[i] + value) / (n + 1.0);
  ++n_action_[i];
}

double fal_confidence(long count, long K, double sigma, double delta) {
  if (count <= 0) return std::numeric_limits<double>::infinity();
  const double n = double(count);
  const double log_term = std::log(double(K) * std::sqrt(1.0 + n) / delta);
  return std::sqrt((1.0 + n) / (n * n) * (4.0 * sigma * sigma * log_term));
}

double fal_confidence(const FalStats& stats, const FalParams& params, long K, int t, int x,
                      int a_or_stop) {
  const long count = a_or_stop == stats.num_actions() ? stats.n_state(t, x)
                                                      : stats.n_action(t, x, a_or_stop);
  return fal_confidence(count, K, params.sigma, params.delta);
}

FalChoice fal_action(const Env& env, const FalStats& stats, const FalParams& params, int t,
                     int x, const std::vector<uint8_t>* used_mask) {
  const int stop = env.stop_action();
  const long K = env.K();
  const double conf_stop = fal_confidence(stats.n_state(t, x), K, params.sigma, params.delta);
  const double u_stop = stats.r_hat(t, x) + conf_stop + params.epsilon_stop_bias;

  FalChoice best{stop, conf_stop, u_stop};
  if (t == env.l_max()) return best;

  int best_a = -1;
  double best_u = -std::numeric_limits<double>::infinity();
  double best_conf = 0.0;
  for (int a : env.defined_actions(t, x)) {
    if (used_mask && (*used_mask)[size_t(a)]) continue;
    const double conf = fal_confidence(stats.n_action(t, x, a), K, params.sigma, params.delta);
    const double u = stats.g_hat(t, x, a) + conf;
    if (u > best_u) {
      best_u = u;
      best_a = a;
      best_conf = conf;
    }
  }
  // stop >= best continuation covers the +inf vs +inf tie of a fresh state.
  if (best_a < 0 || u_stop >= best_u) return best;
  return {best_a, best_conf, best_u};
}

void fal_update(FalStats& stats, const RoundTrace& trace) {
  const int T = trace.stop_stage();
  for (int t = 1; t <= T; ++t)
    stats.absorb_reward(t, trace.states[size_t(t - 1)], trace.realized_rewards[size_t(t - 1)]);
  for (int t = 1; t <= T - 1; ++t)
    stats.absorb_gain(t, trace.states[size_t(t - 1)], trace.actions[size_t(t - 1)],
                      trace.realized_rewards[size_t(t)] - trace.realized_costs[size_t(t - 1)]);
  stats.record_stop(T, trace.states[size_t(T - 1)]);
}

FalPolicy::FalPolicy(const Env& env, FalParams params)
    : env_(&env),
      params_(params),
      K_(env.K()),
      stats_(env.l_max(), env.num_states(), env.num_actions()),
      used_(size_t(env.num_actions()), 0) {
  if (!(params_.delta > 0.0 && params_.delta < 1.0))
    throw_config("fal delta must be in (0, 1)");
  if (!(params_.sigma >= 0.0)) throw_config("fal sigma must be nonnegative");
  if (!(params_.epsilon_stop_bias >= 0.0))
    throw_config("fal epsilon stop bias must be nonnegative");
}

void FalPolicy::begin_round(long round_index) {
  (void)round_index;
  std::fill(used_.begin(), used_.end(), 0);
  selections_.clear();
}

int FalPolicy::select(int t, int x) {
  const std::vector<uint8_t>* mask =
      params_.mask == ActionMaskMode::OncePerRound ? &used_ : nullptr;
  FalChoice choice = fal_action(*env_, stats_, params_, t, x, mask);
  if (choice.action != env_->stop_action() && params_.mask == ActionMaskMode::OncePerRound)
    used_[size_t(choice.action)] = 1;
  selections_.push_back({t, x, choice.action, choice.conf});
  return choice.action;
}

}  // namespace smab
