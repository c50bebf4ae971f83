#include "smab/env.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>

namespace smab {

namespace {

constexpr double kDistTolerance = 1e-9;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string loc(int t, const std::string& x) {
  return "(t=" + std::to_string(t) + ", x=" + x + ")";
}
std::string loc(int t, const std::string& x, const std::string& a) {
  return "(t=" + std::to_string(t) + ", x=" + x + ", a=" + a + ")";
}

class Index {
 public:
  Index(const std::vector<std::string>& names, const char* what) {
    for (size_t i = 0; i < names.size(); ++i) {
      if (!map_.emplace(names[i], int(i)).second)
        throw_validation(std::string(what) + " list contains duplicate id '" + names[i] + "'");
    }
  }
  int at(const std::string& name) const {
    auto it = map_.find(name);
    return it == map_.end() ? -1 : it->second;
  }
  int require(const std::string& name, const char* what, const std::string& where) const {
    int i = at(name);
    if (i < 0)
      throw_validation("unknown " + std::string(what) + " '" + name + "' in " + where);
    return i;
  }

 private:
  std::unordered_map<std::string, int> map_;
};

}  // namespace

Env Env::compile(EnvSpec spec_in) {
  Env e;
  e.spec_ = std::move(spec_in);
  const EnvSpec& s = e.spec_;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  if (s.l_max < 1) throw_validation("l_max must be a positive integer");
  if (s.states.empty()) throw_validation("states must be nonempty");
  if (s.actions.empty()) throw_validation("actions must be nonempty");
  if (s.feedbacks.empty()) throw_validation("feedbacks must be nonempty");
  if (!(s.c_max >= 0.0)) throw_validation("c_max must be nonnegative");
  if (!(s.r_max >= 0.0)) throw_validation("r_max must be nonnegative");
  if (!(s.noise.sigma >= 0.0)) throw_validation("noise sigma must be nonnegative");

  Index states(s.states, "state");
  Index actions(s.actions, "action");
  Index feedbacks(s.feedbacks, "feedback");
  for (const auto& a : s.actions)
    if (a == kStopName)
      throw_validation("the stop action is implicit and must not be listed in actions");

  e.S_ = int(s.states.size());
  e.A_ = int(s.actions.size());
  e.F_ = int(s.feedbacks.size());
  e.x0_ = states.at(kInitialState);
  if (e.x0_ < 0)
    throw_validation(std::string("states must contain the initial state ") + kInitialState);

  const int L = s.l_max;
  const size_t ls = size_t(L) * e.S_;
  const size_t lsa = L > 1 ? size_t(L - 1) * e.S_ * e.A_ : 0;
  e.reward_.assign(ls, nan);
  e.cost_.assign(lsa, nan);
  e.fdist_.assign(lsa * e.F_, 0.0);
  e.fpresent_.assign(lsa, 0);
  e.smap_.assign(lsa * e.F_, -1);

  for (const auto& [t, per_state] : s.reward_mean) {
    if (t < 1 || t > L)
      throw_validation("reward_mean stage " + std::to_string(t) + " out of range [1, l_max]");
    for (const auto& [xname, v] : per_state) {
      int x = states.require(xname, "state", "reward_mean stage " + std::to_string(t));
      if (!(v >= 0.0 && v <= s.r_max))
        throw_validation("reward out of [0, r_max] at " + loc(t, xname) + ": " + fmt(v));
      e.reward_[e.sx(t, x)] = v;
    }
  }

  for (const auto& [t, per_state] : s.cost_mean) {
    if (t < 1 || t > L - 1)
      throw_validation("cost_mean stage " + std::to_string(t) + " out of range [1, l_max-1]");
    for (const auto& [xname, per_action] : per_state) {
      int x = states.require(xname, "state", "cost_mean stage " + std::to_string(t));
      for (const auto& [aname, v] : per_action) {
        int a = actions.require(aname, "action", "cost_mean " + loc(t, xname));
        if (!(v >= 0.0 && v <= s.c_max))
          throw_validation("cost out of [0, c_max] at " + loc(t, xname, aname) + ": " + fmt(v));
        e.cost_[e.txa(t, x, a)] = v;
      }
    }
  }

  for (const auto& [t, per_state] : s.feedback_dist) {
    if (t < 1 || t > L - 1)
      throw_validation("feedback_dist stage " + std::to_string(t) + " out of range [1, l_max-1]");
    for (const auto& [xname, per_action] : per_state) {
      int x = states.require(xname, "state", "feedback_dist stage " + std::to_string(t));
      for (const auto& [aname, probs] : per_action) {
        int a = actions.require(aname, "action", "feedback_dist " + loc(t, xname));
        if (int(probs.size()) != e.F_)
          throw_validation("probability vector at " + loc(t, xname, aname) + " has " +
                           std::to_string(probs.size()) + " entries, expected " +
                           std::to_string(e.F_));
        double sum = 0.0;
        for (size_t f = 0; f < probs.size(); ++f) {
          if (probs[f] < 0.0)
            throw_validation("negative probability " + fmt(probs[f]) + " at " +
                             loc(t, xname, aname) + " feedback " + s.feedbacks[f]);
          sum += probs[f];
        }
        if (std::fabs(sum - 1.0) > kDistTolerance)
          throw_validation("probability vector at " + loc(t, xname, aname) + " sums to " +
                           fmt(sum) + " (residual " + fmt(sum - 1.0) + ")");
        size_t base = e.txa(t, x, a) * e.F_;
        for (size_t f = 0; f < probs.size(); ++f) e.fdist_[base + f] = probs[f];
        e.fpresent_[e.txa(t, x, a)] = 1;
      }
    }
  }

  for (const auto& [t, per_state] : s.state_map) {
    if (t < 1 || t > L - 1)
      throw_validation("state_map stage " + std::to_string(t) + " out of range [1, l_max-1]");
    for (const auto& [xname, per_action] : per_state) {
      int x = states.require(xname, "state", "state_map stage " + std::to_string(t));
      for (const auto& [aname, per_feedback] : per_action) {
        int a = actions.require(aname, "action", "state_map " + loc(t, xname));
        for (const auto& [fname, target] : per_feedback) {
          int f = feedbacks.require(fname, "feedback", "state_map " + loc(t, xname, aname));
          int y = states.at(target);
          if (y < 0)
            throw_validation("state_map output '" + target + "' at " + loc(t, xname, aname) +
                             " feedback " + fname + " is not a declared state");
          e.smap_[e.txa(t, x, a) * e.F_ + f] = y;
        }
      }
    }
  }

  // Reachability sweep from (1, initial state); every reachable pair must be
  // fully playable by the round engine.
  e.reach_.assign(ls, 0);
  e.reach_[e.sx(1, e.x0_)] = 1;
  for (int t = 1; t <= L - 1; ++t) {
    for (int x = 0; x < e.S_; ++x) {
      if (!e.reach_[e.sx(t, x)]) continue;
      for (int a = 0; a < e.A_; ++a) {
        if (!e.fpresent_[e.txa(t, x, a)]) continue;
        if (std::isnan(e.cost_[e.txa(t, x, a)]))
          throw_validation("missing cost_mean at reachable " +
                           loc(t, s.states[x], s.actions[a]));
        size_t base = e.txa(t, x, a) * e.F_;
        for (int f = 0; f < e.F_; ++f) {
          if (e.fdist_[base + f] <= 0.0) continue;
          int y = e.smap_[base + f];
          if (y < 0)
            throw_validation("state_map missing entry at reachable " +
                             loc(t, s.states[x], s.actions[a]) + " feedback " +
                             s.feedbacks[f]);
          e.reach_[e.sx(t + 1, y)] = 1;
        }
      }
    }
  }
  for (int t = 1; t <= L; ++t)
    for (int x = 0; x < e.S_; ++x)
      if (e.reach_[e.sx(t, x)] && std::isnan(e.reward_[e.sx(t, x)]))
        throw_validation("missing reward_mean at reachable " + loc(t, s.states[x]));

  e.defined_.assign(ls, {});
  for (int t = 1; t <= L - 1; ++t) {
    for (int x = 0; x < e.S_; ++x) {
      for (int a = 0; a < e.A_; ++a) {
        size_t i = e.txa(t, x, a);
        if (!e.fpresent_[i] || std::isnan(e.cost_[i])) continue;
        bool ok = true;
        for (int f = 0; f < e.F_ && ok; ++f) {
          if (e.fdist_[i * e.F_ + f] <= 0.0) continue;
          int y = e.smap_[i * e.F_ + f];
          ok = y >= 0 && !std::isnan(e.reward_[e.sx(t + 1, y)]);
        }
        if (ok) e.defined_[e.sx(t, x)].push_back(a);
      }
    }
  }
  return e;
}

const std::string& Env::action_name(int a) const {
  static const std::string stop_name = kStopName;
  return a == A_ ? stop_name : spec_.actions[size_t(a)];
}

int Env::state_index(const std::string& name) const {
  for (size_t i = 0; i < spec_.states.size(); ++i)
    if (spec_.states[i] == name) return int(i);
  return -1;
}

int Env::action_index(const std::string& name) const {
  for (size_t i = 0; i < spec_.actions.size(); ++i)
    if (spec_.actions[i] == name) return int(i);
  return -1;
}

int Env::feedback_index(const std::string& name) const {
  for (size_t i = 0; i < spec_.feedbacks.size(); ++i)
    if (spec_.feedbacks[i] == name) return int(i);
  return -1;
}

bool Env::has_feedback_dist(int t, int x, int a) const {
  return t >= 1 && t < spec_.l_max && fpresent_[txa(t, x, a)];
}

std::span<const double> Env::feedback_dist(int t, int x, int a) const {
  return {fdist_.data() + txa(t, x, a) * F_, size_t(F_)};
}

int Env::transition(int t, int x, int a, int f) const {
  if (t < 1 || t >= spec_.l_max) return -1;
  return smap_[txa(t, x, a) * F_ + f];
}

bool Env::has_cost(int t, int x, int a) const {
  return t >= 1 && t < spec_.l_max && !std::isnan(cost_[txa(t, x, a)]);
}

double Env::cost_mean(int t, int x, int a) const { return cost_[txa(t, x, a)]; }

bool Env::has_reward(int t, int x) const { return !std::isnan(reward_[sx(t, x)]); }

double Env::reward_mean(int t, int x) const { return reward_[sx(t, x)]; }

const std::vector<int>& Env::defined_actions(int t, int x) const {
  static const std::vector<int> empty;
  if (t < 1 || t >= spec_.l_max) return empty;
  return defined_[sx(t, x)];
}

bool Env::reachable(int t, int x) const { return reach_[sx(t, x)] != 0; }

std::vector<std::pair<int, int>> Env::reachable_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int t = 1; t <= spec_.l_max; ++t)
    for (int x = 0; x < S_; ++x)
      if (reach_[sx(t, x)]) out.emplace_back(t, x);
  return out;
}

EnvSpec validate_spec(EnvSpec spec) {
  Env::compile(spec);
  return spec;
}

}  // namespace smab
