#include <cmath>

#include "doctest.h"
#include "smab/analysis.hpp"
#include "smab/scenarios.hpp"
#include "support/random_env.hpp"

using namespace smab;

namespace {

// Independent oracle: the ex-ante terminal reward as a plain sum over the
// feedback alphabet, straight from the document tables.
double brute_force_y(const EnvSpec& spec, int t, const std::string& x, const std::string& a) {
  const auto& probs = spec.feedback_dist.at(t).at(x).at(a);
  double y = 0.0;
  for (size_t f = 0; f < probs.size(); ++f) {
    const std::string& target = spec.state_map.at(t).at(x).at(a).at(spec.feedbacks[f]);
    y += probs[f] * spec.reward_mean.at(t + 1).at(target);
  }
  return y;
}

}  // namespace

TEST_CASE("worked example validates") {
  EnvSpec spec = worked_example_env();
  CHECK_NOTHROW(validate_spec(spec));
  Env env = Env::compile(spec);
  CHECK(env.l_max() == 3);
  CHECK(env.num_states() == 21);
  CHECK(env.num_actions() == 2);
  CHECK(env.K() == 3 * 21 * 3);
}

TEST_CASE("validation reports a bad probability vector with its triplet") {
  EnvSpec spec = worked_example_env();
  spec.feedback_dist[1][kInitialState]["a"] = {0.4, 0.5};
  try {
    validate_spec(spec);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    std::string msg = e.what();
    CHECK(msg.find("sums to 0.9") != std::string::npos);
    CHECK(msg.find("t=1") != std::string::npos);
    CHECK(msg.find("a=a") != std::string::npos);
  }
}

TEST_CASE("validation reports cost range violations") {
  EnvSpec spec = worked_example_env();
  spec.cost_mean[1][kInitialState]["a"] = -0.1;
  try {
    validate_spec(spec);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("cost out of [0, c_max]") != std::string::npos);
  }
}

TEST_CASE("validation catches structural problems") {
  EnvSpec spec = worked_example_env();
  spec.l_max = 0;
  CHECK_THROWS_AS(validate_spec(spec), Error);

  spec = worked_example_env();
  spec.states.erase(spec.states.begin());  // drop the initial state
  CHECK_THROWS_AS(validate_spec(spec), Error);

  spec = worked_example_env();
  spec.reward_mean[2]["(a,1)"] = 99.0;  // above r_max
  CHECK_THROWS_AS(validate_spec(spec), Error);

  spec = worked_example_env();
  spec.state_map[1][kInitialState]["a"]["1"] = "nowhere";
  CHECK_THROWS_AS(validate_spec(spec), Error);

  spec = worked_example_env();
  spec.reward_mean[2].erase("(a,1)");  // reachable state loses its reward
  CHECK_THROWS_AS(validate_spec(spec), Error);
}

TEST_CASE("worked example gains") {
  Env env = Env::compile(worked_example_env());
  GainTable tab = compute_gain_table(env);
  const int x0 = env.initial_state();
  const int a = env.action_index("a");
  const int b = env.action_index("b");

  CHECK(tab.y[tab.sxa(1, x0, a)] == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(tab.g[tab.sxa(1, x0, a)] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(tab.g[tab.sxa(1, x0, b)] == doctest::Approx(2.0).epsilon(1e-12));

  // stop's gain is the state's expected terminal reward everywhere
  for (int t = 1; t <= tab.l_max; ++t)
    for (int x = 0; x < tab.S; ++x)
      if (tab.state_defined[tab.sx(t, x)])
        CHECK(tab.g[tab.sxa(t, x, env.stop_action())] == env.reward_mean(t, x));

  const int x_a1 = env.state_index("(a,1)");
  CHECK(tab.g[tab.sxa(2, x_a1, b)] == doctest::Approx(11.8).epsilon(1e-12));
  CHECK(tab.g_star[tab.sx(2, x_a1)] == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(tab.is_optimal(2, x_a1, env.stop_action()));
}

TEST_CASE("ex-ante rewards match brute-force summation on small environments") {
  for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    EnvSpec spec = testing::random_env(seed);
    Env env = Env::compile(spec);
    GainTable tab = compute_gain_table(env);
    for (int t = 1; t <= env.l_max() - 1; ++t) {
      for (int x = 0; x < env.num_states(); ++x) {
        for (int a : env.defined_actions(t, x)) {
          double oracle = brute_force_y(spec, t, env.state_name(x), env.action_name(a));
          CHECK(tab.y[tab.sxa(t, x, a)] == doctest::Approx(oracle).epsilon(1e-12));
        }
      }
    }
  }
  EnvSpec spec = worked_example_env();
  Env env = Env::compile(spec);
  GainTable tab = compute_gain_table(env);
  CHECK(tab.y[tab.sxa(1, env.initial_state(), 0)] ==
        doctest::Approx(brute_force_y(spec, 1, kInitialState, "a")).epsilon(1e-12));
}

TEST_CASE("optimal set is the argmax of the gains") {
  for (uint64_t seed : {11u, 12u, 13u}) {
    Env env = Env::compile(testing::random_env(seed));
    GainTable tab = compute_gain_table(env);
    for (int t = 1; t <= env.l_max(); ++t) {
      for (int x = 0; x < env.num_states(); ++x) {
        if (!tab.state_defined[tab.sx(t, x)]) continue;
        double best = -1e300;
        for (int a = 0; a <= tab.A; ++a)
          if (tab.action_defined[tab.sxa(t, x, a)]) best = std::max(best, tab.g[tab.sxa(t, x, a)]);
        CHECK(tab.g_star[tab.sx(t, x)] == doctest::Approx(best).epsilon(1e-12));
        for (int a = 0; a <= tab.A; ++a) {
          if (!tab.action_defined[tab.sxa(t, x, a)]) continue;
          bool in_set = tab.is_optimal(t, x, a);
          bool argmax = tab.g[tab.sxa(t, x, a)] >= best - kOptimalSetTolerance;
          CHECK(in_set == argmax);
        }
        CHECK(!tab.optimal_set[tab.sx(t, x)].empty());
        if (t == tab.l_max) {
          CHECK(tab.optimal_set[tab.sx(t, x)].size() == 1);
          CHECK(tab.optimal_set[tab.sx(t, x)].front() == env.stop_action());
        }
      }
    }
  }
}

TEST_CASE("scaling rewards and costs scales the derived quantities") {
  const double scale = 2.0;
  EnvSpec base = testing::random_env(21);
  EnvSpec scaled = base;
  for (auto& [t, per_state] : scaled.reward_mean)
    for (auto& [x, v] : per_state) v *= scale;
  for (auto& [t, per_state] : scaled.cost_mean)
    for (auto& [x, per_action] : per_state)
      for (auto& [a, v] : per_action) v *= scale;
  scaled.r_max *= scale;
  scaled.c_max *= scale;

  Env env1 = Env::compile(base);
  Env env2 = Env::compile(scaled);
  GainTable t1 = full_gain_table(env1);
  GainTable t2 = full_gain_table(env2);
  for (int t = 1; t <= t1.l_max; ++t) {
    for (int x = 0; x < t1.S; ++x) {
      if (!t1.state_defined[t1.sx(t, x)]) continue;
      CHECK(t2.mu_star[t1.sx(t, x)] ==
            doctest::Approx(scale * t1.mu_star[t1.sx(t, x)]).epsilon(1e-9));
      CHECK(t2.optimal_set[t1.sx(t, x)] == t1.optimal_set[t1.sx(t, x)]);
      for (int a = 0; a <= t1.A; ++a) {
        if (!t1.action_defined[t1.sxa(t, x, a)]) continue;
        CHECK(t2.g[t1.sxa(t, x, a)] ==
              doctest::Approx(scale * t1.g[t1.sxa(t, x, a)]).epsilon(1e-9));
        CHECK(t2.delta[t1.sxa(t, x, a)] ==
              doctest::Approx(scale * t1.delta[t1.sxa(t, x, a)]).epsilon(1e-9));
        CHECK(t2.omega[t1.sxa(t, x, a)] ==
              doctest::Approx(scale * t1.omega[t1.sxa(t, x, a)]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("unreachable declared pairs are tabulated and flagged") {
  EnvSpec spec = worked_example_env();
  // an extra state with a declared reward but no path from the initial state
  spec.states.push_back("orphan");
  spec.reward_mean[2]["orphan"] = 1.5;
  Env env = Env::compile(spec);
  GainTable tab = compute_gain_table(env);
  int x = env.state_index("orphan");
  CHECK(env.reachable(2, env.state_index("(a,1)")));
  CHECK(!env.reachable(2, x));
  CHECK(tab.state_defined[tab.sx(2, x)]);
  CHECK(tab.state_reachable[tab.sx(2, x)] == 0);
  CHECK(tab.g[tab.sxa(2, x, env.stop_action())] == 1.5);
}
