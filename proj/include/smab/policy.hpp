#pragma once

#include <string>
#include <vector>

#include "smab/gain_table.hpp"
#include "smab/trace.hpp"

namespace smab {

// Per-round action selection. The engine calls begin_round, then select once
// per stage until stop is returned (forcing stop at l_max), then observe with
// the completed trace including realized outcomes.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void begin_round(long round_index) { (void)round_index; }
  virtual int select(int t, int x) = 0;
  virtual void observe(const RoundTrace& trace) { (void)trace; }
};

// Greedy oracle rule: stop when the stop action is among the gain maximizers
// (stop wins every tie it participates in) or the stage budget is exhausted;
// otherwise take the maximizing continuation action, ties broken by declared
// action order.
int benchmark_action(const Env& env, const GainTable& table, int t, int x);

class BenchmarkPolicy final : public Policy {
 public:
  BenchmarkPolicy(const Env& env, const GainTable& table) : env_(&env), table_(&table) {}
  int select(int t, int x) override { return benchmark_action(*env_, *table_, t, x); }

 private:
  const Env* env_;
  const GainTable* table_;
};

// Plays seq[t] while the plan lasts, then stop.
int fixed_sequence_action(const std::vector<int>& seq, int t, int stop_action);

class FixedSequencePolicy final : public Policy {
 public:
  // The plan must leave room for the stop action: |seq| < l_max.
  FixedSequencePolicy(const Env& env, std::vector<int> seq);
  FixedSequencePolicy(const Env& env, const std::vector<std::string>& names);
  int select(int t, int x) override;

 private:
  const Env* env_;
  std::vector<int> seq_;
};

}  // namespace smab
