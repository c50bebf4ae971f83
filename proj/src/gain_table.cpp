#include "smab/gain_table.hpp"

#include <limits>

namespace smab {

GainTable compute_gain_table(const Env& env) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  GainTable tab;
  tab.l_max = env.l_max();
  tab.S = env.num_states();
  tab.A = env.num_actions();
  const size_t ls = size_t(tab.l_max) * tab.S;
  const size_t lsa = ls * (tab.A + 1);
  tab.y.assign(lsa, nan);
  tab.g.assign(lsa, nan);
  tab.delta.assign(lsa, nan);
  tab.mu_lower.assign(lsa, nan);
  tab.omega.assign(lsa, nan);
  tab.g_star.assign(ls, nan);
  tab.mu_star.assign(ls, nan);
  tab.optimal_set.assign(ls, {});
  tab.state_defined.assign(ls, 0);
  tab.action_defined.assign(lsa, 0);
  tab.state_reachable.assign(ls, 0);

  const int stop = env.stop_action();
  for (int t = 1; t <= tab.l_max; ++t) {
    for (int x = 0; x < tab.S; ++x) {
      if (!env.has_reward(t, x)) continue;
      const size_t i = tab.sx(t, x);
      tab.state_defined[i] = 1;
      tab.state_reachable[i] = env.reachable(t, x) ? 1 : 0;

      const double r = env.reward_mean(t, x);
      tab.y[tab.sxa(t, x, stop)] = r;
      tab.g[tab.sxa(t, x, stop)] = r;  // stop cost is always zero
      tab.action_defined[tab.sxa(t, x, stop)] = 1;

      double best = r;
      for (int a : env.defined_actions(t, x)) {
        auto probs = env.feedback_dist(t, x, a);
        double y = 0.0;
        for (int f = 0; f < env.num_feedbacks(); ++f) {
          if (probs[f] <= 0.0) continue;
          y += probs[f] * env.reward_mean(t + 1, env.transition(t, x, a, f));
        }
        const size_t j = tab.sxa(t, x, a);
        tab.y[j] = y;
        tab.g[j] = y - env.cost_mean(t, x, a);
        tab.action_defined[j] = 1;
        if (tab.g[j] > best) best = tab.g[j];
      }
      tab.g_star[i] = best;
      for (int a = 0; a <= tab.A; ++a) {
        const size_t j = tab.sxa(t, x, a);
        if (!tab.action_defined[j]) continue;
        tab.delta[j] = best - tab.g[j];
        if (tab.delta[j] <= kOptimalSetTolerance) tab.optimal_set[i].push_back(a);
      }
    }
  }
  return tab;
}

}  // namespace smab
