#include "smab/policy.hpp"

namespace smab {

int benchmark_action(const Env& env, const GainTable& table, int t, int x) {
  const int stop = env.stop_action();
  if (t == env.l_max()) return stop;
  if (!table.state_defined[table.sx(t, x)]) return stop;
  if (table.is_optimal(t, x, stop)) return stop;
  for (int a : table.optimal_set[table.sx(t, x)])
    if (a != stop) return a;
  return stop;
}

int fixed_sequence_action(const std::vector<int>& seq, int t, int stop_action) {
  if (t >= 1 && t <= int(seq.size())) return seq[size_t(t - 1)];
  return stop_action;
}

FixedSequencePolicy::FixedSequencePolicy(const Env& env, std::vector<int> seq)
    : env_(&env), seq_(std::move(seq)) {
  if (int(seq_.size()) >= env.l_max())
    throw_config("fixed sequence of length " + std::to_string(seq_.size()) +
                 " does not fit in l_max = " + std::to_string(env.l_max()) + " stages");
  for (int a : seq_)
    if (a < 0 || a >= env.num_actions())
      throw_config("fixed sequence contains an unknown action index");
}

FixedSequencePolicy::FixedSequencePolicy(const Env& env,
                                         const std::vector<std::string>& names)
    : env_(&env) {
  for (const auto& name : names) {
    int a = env.action_index(name);
    if (a < 0) throw_config("fixed sequence contains unknown action '" + name + "'");
    seq_.push_back(a);
  }
  if (int(seq_.size()) >= env.l_max())
    throw_config("fixed sequence of length " + std::to_string(seq_.size()) +
                 " does not fit in l_max = " + std::to_string(env.l_max()) + " stages");
}

int FixedSequencePolicy::select(int t, int x) {
  (void)x;
  return fixed_sequence_action(seq_, t, env_->stop_action());
}

}  // namespace smab
