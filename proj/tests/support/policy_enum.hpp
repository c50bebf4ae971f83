#pragma once

#include <limits>
#include <map>
#include <memory>
#include <vector>

#include "smab/gain_table.hpp"

namespace smab::testing {

// Brute-force enumeration of every deterministic adaptive policy rooted at a
// stage-state pair, independent of the backward-induction code under test.
// Each enumerated entry carries the policy's exact expected gain-to-go
// (computed by expanding the feedback tree) and whether every choice the
// policy makes agrees with the greedy oracle rule (stop when stop is optimal
// or the stage budget is exhausted, otherwise any gain-maximizing
// continuation action).
struct EnumeratedPolicies {
  std::vector<double> values;
  std::vector<uint8_t> greedy_consistent;
};

class PolicyEnumerator {
 public:
  PolicyEnumerator(const Env& env, const GainTable& table, long cap = 2000000)
      : env_(env), table_(table), cap_(cap) {}

  const EnumeratedPolicies& all_from(int t, int x) {
    auto key = std::make_pair(t, x);
    auto it = memo_.find(key);
    if (it != memo_.end()) return *it->second;

    auto out = std::make_unique<EnumeratedPolicies>();
    // stopping immediately
    out->values.push_back(env_.reward_mean(t, x));
    out->greedy_consistent.push_back(stop_is_greedy(t, x) ? 1 : 0);
    if (t < env_.l_max()) {
      for (int a : env_.defined_actions(t, x)) append_continuations(*out, t, x, a);
    }
    auto& slot = memo_[key];
    slot = std::move(out);
    return *slot;
  }

  // Minimum expected gain over all policies whose first choice at (t, x) is
  // `first_action` (stop allowed).
  double min_value_after(int t, int x, int first_action) {
    if (first_action == env_.stop_action() || t == env_.l_max())
      return env_.reward_mean(t, x);
    EnumeratedPolicies forced;
    append_continuations(forced, t, x, first_action);
    double best = std::numeric_limits<double>::infinity();
    for (double v : forced.values) best = std::min(best, v);
    return best;
  }

  double max_value(int t, int x) {
    const auto& all = all_from(t, x);
    double best = -std::numeric_limits<double>::infinity();
    for (double v : all.values) best = std::max(best, v);
    return best;
  }

  // Best value among policies that follow the greedy oracle rule everywhere
  // they act; the oracle policy itself is in this set, so it is nonempty.
  double max_greedy_consistent_value(int t, int x) {
    const auto& all = all_from(t, x);
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < all.values.size(); ++i)
      if (all.greedy_consistent[i]) best = std::max(best, all.values[i]);
    return best;
  }

 private:
  bool stop_is_greedy(int t, int x) const {
    return t == env_.l_max() || table_.is_optimal(t, x, env_.stop_action());
  }
  bool action_is_greedy(int t, int x, int a) const {
    return t < env_.l_max() && !table_.is_optimal(t, x, env_.stop_action()) &&
           table_.is_optimal(t, x, a);
  }

  // Cross product over the feedback branches of taking `a` at (t, x).
  void append_continuations(EnumeratedPolicies& out, int t, int x, int a) {
    auto probs = env_.feedback_dist(t, x, a);
    std::vector<double> branch_prob;
    std::vector<const EnumeratedPolicies*> branch;
    for (int f = 0; f < env_.num_feedbacks(); ++f) {
      if (probs[f] <= 0.0) continue;
      branch_prob.push_back(probs[f]);
      branch.push_back(&all_from(t + 1, env_.transition(t, x, a, f)));
    }
    const bool a_greedy = action_is_greedy(t, x, a);
    const double base = -env_.cost_mean(t, x, a);
    std::vector<size_t> idx(branch.size(), 0);
    while (true) {
      double value = base;
      bool consistent = a_greedy;
      for (size_t b = 0; b < branch.size(); ++b) {
        value += branch_prob[b] * branch[b]->values[idx[b]];
        consistent = consistent && branch[b]->greedy_consistent[idx[b]];
      }
      out.values.push_back(value);
      out.greedy_consistent.push_back(consistent ? 1 : 0);
      if (long(out.values.size()) > cap_)
        throw std::runtime_error("policy enumeration exceeded its cap");
      size_t b = 0;
      while (b < branch.size()) {
        if (++idx[b] < branch[b]->values.size()) break;
        idx[b] = 0;
        ++b;
      }
      if (b == branch.size()) break;
    }
  }

  const Env& env_;
  const GainTable& table_;
  long cap_;
  std::map<std::pair<int, int>, std::unique_ptr<EnumeratedPolicies>> memo_;
};

}  // namespace smab::testing
