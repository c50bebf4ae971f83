#pragma once

#include <span>
#include <vector>

#include "smab/error.hpp"

namespace smab {

enum class Diagnosis { Benign, Malignant };

// Rule used by the clinical-guideline baseline: malignant as soon as any
// observed score reaches 4.
Diagnosis threshold_predict(std::span<const int> scores);

// Majority label of the observations recorded per terminal state; an empty
// or tied tally defaults to benign.
class FrequencyPredictor {
 public:
  explicit FrequencyPredictor(int num_states)
      : malignant_(size_t(num_states), 0), benign_(size_t(num_states), 0) {}

  Diagnosis predict(int terminal_state) const {
    return malignant_[size_t(terminal_state)] > benign_[size_t(terminal_state)]
               ? Diagnosis::Malignant
               : Diagnosis::Benign;
  }
  void observe(int terminal_state, bool malignant) {
    (malignant ? malignant_ : benign_)[size_t(terminal_state)] += 1;
  }

 private:
  std::vector<long> malignant_, benign_;
};

// Guideline test plan over action indices {0=MG, 1=US, 2=MR}: mammogram
// always, ultrasound for high breast density, MR for high-risk patients.
std::vector<int> guideline_plan(bool high_density, bool high_risk);

// Plan lookup for stage t; past the plan returns `stop_action`.
int guideline_action(const std::vector<int>& plan, int t, int stop_action);

// All permutations of non-empty subsets of the action set, ordered by length
// and then lexicographically by action index. For 3 actions this yields the
// 15 composite arms.
std::vector<std::vector<int>> composite_arms(int num_actions);

// Standard UCB1 index policy: unplayed arms first (in arm order), then
// argmax of mean + sqrt(2 ln(total plays) / plays).
class Ucb1 {
 public:
  explicit Ucb1(int arms) : sum_(size_t(arms), 0.0), plays_(size_t(arms), 0) {}

  int select() const;
  void update(int arm, double reward) {
    sum_[size_t(arm)] += reward;
    plays_[size_t(arm)] += 1;
    total_ += 1;
  }
  double index_value(int arm) const;
  long plays(int arm) const { return plays_[size_t(arm)]; }

 private:
  std::vector<double> sum_;
  std::vector<long> plays_;
  long total_ = 0;
};

}  // namespace smab
