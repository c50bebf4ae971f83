#pragma once

#include <cstdint>
#include <vector>

#include "smab/env.hpp"

namespace smab {

// Membership tolerance for the optimal-action set: gains are exact short
// sums of table entries at this scale, so near-ties below 1e-12 are ties.
inline constexpr double kOptimalSetTolerance = 1e-12;

// Quantities derived from the true parameters. Triplet arrays are indexed
// (t, x, a) with a in [0, num_actions]; the last slot is the stop action.
// y at t = l_max is undefined except for the stop entry. mu_star, mu_lower
// and omega are filled by compute_values(); until then they are NaN.
struct GainTable {
  int l_max = 0, S = 0, A = 0;

  std::vector<double> y;        // ex-ante terminal reward
  std::vector<double> g;        // gain = y - cost (stop: reward itself)
  std::vector<double> delta;    // suboptimality gap, g_star - g
  std::vector<double> g_star;   // per (t, x)
  std::vector<std::vector<int>> optimal_set;  // per (t, x), ascending indices
  std::vector<double> mu_star;   // greedy continuation value, per (t, x)
  std::vector<double> mu_lower;  // worst continuation value after the action
  std::vector<double> omega;     // mu_star - mu_lower
  std::vector<uint8_t> state_defined;   // (t, x) has a declared reward
  std::vector<uint8_t> action_defined;  // (t, x, a) tabulated (stop included)
  std::vector<uint8_t> state_reachable;

  size_t sx(int t, int x) const { return size_t(t - 1) * S + size_t(x); }
  size_t sxa(int t, int x, int a) const { return sx(t, x) * (A + 1) + size_t(a); }
  bool is_optimal(int t, int x, int a) const {
    return action_defined[sxa(t, x, a)] && delta[sxa(t, x, a)] <= kOptimalSetTolerance;
  }
};

// Fills y, g, delta, g_star and optimal_set for every tabulated (t, x):
// stop carries the state's expected terminal reward at zero cost, and each
// playable continuation gets the probability-weighted next-stage reward
// minus its cost. At t = l_max only stop is tabulated.
GainTable compute_gain_table(const Env& env);

}  // namespace smab
