#pragma once

#include <string>
#include <vector>

#include "smab/rng.hpp"
#include "smab/types.hpp"

namespace smab::testing {

// Small random environment with total tables: every (t, x, a) has a
// distribution, cost and transitions, and every (t, x) has a reward, so all
// pairs are playable. Sizes stay within l_max <= 3, |X| <= 4, |A| <= 3.
inline EnvSpec random_env(uint64_t seed) {
  RngStream rng(seed);
  EnvSpec spec;
  spec.l_max = 2 + int(rng.next_u64() % 2);
  const int S = 2 + int(rng.next_u64() % 3);
  const int A = 1 + int(rng.next_u64() % 3);
  const int F = 2 + int(rng.next_u64() % 2);
  spec.states.push_back(kInitialState);
  for (int x = 1; x < S; ++x) spec.states.push_back("s" + std::to_string(x));
  for (int a = 0; a < A; ++a) spec.actions.push_back("a" + std::to_string(a));
  for (int f = 0; f < F; ++f) spec.feedbacks.push_back("f" + std::to_string(f));
  spec.c_max = 1.0;
  spec.r_max = 10.0;
  spec.noise = {NoiseModel::Family::Gaussian, 0.5};

  for (int t = 1; t <= spec.l_max; ++t)
    for (int x = 0; x < S; ++x)
      spec.reward_mean[t][spec.states[size_t(x)]] = 10.0 * rng.next_uniform();

  for (int t = 1; t <= spec.l_max - 1; ++t) {
    for (int x = 0; x < S; ++x) {
      for (int a = 0; a < A; ++a) {
        std::vector<double> probs(size_t(F));
        double total = 0.0;
        for (double& p : probs) {
          p = -std::log(1.0 - rng.next_uniform());  // exponential weights
          total += p;
        }
        double sum = 0.0;
        for (size_t f = 0; f + 1 < probs.size(); ++f) {
          probs[f] /= total;
          sum += probs[f];
        }
        probs.back() = 1.0 - sum;
        spec.feedback_dist[t][spec.states[size_t(x)]][spec.actions[size_t(a)]] = probs;
        spec.cost_mean[t][spec.states[size_t(x)]][spec.actions[size_t(a)]] = rng.next_uniform();
        for (int f = 0; f < F; ++f)
          spec.state_map[t][spec.states[size_t(x)]][spec.actions[size_t(a)]]
                        [spec.feedbacks[size_t(f)]] =
              spec.states[size_t(rng.next_u64() % uint64_t(S))];
      }
    }
  }
  return spec;
}

}  // namespace smab::testing
