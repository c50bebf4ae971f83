#include "smab/baselines.hpp"

#include <cmath>
#include <limits>

namespace smab {

Diagnosis threshold_predict(std::span<const int> scores) {
  for (int s : scores)
    if (s >= 4) return Diagnosis::Malignant;
  return Diagnosis::Benign;
}

std::vector<int> guideline_plan(bool high_density, bool high_risk) {
  std::vector<int> plan{0};
  if (high_density) plan.push_back(1);
  if (high_risk) plan.push_back(2);
  return plan;
}

int guideline_action(const std::vector<int>& plan, int t, int stop_action) {
  if (t >= 1 && t <= int(plan.size())) return plan[size_t(t - 1)];
  return stop_action;
}

namespace {

void permute_subsets(std::vector<int>& current, std::vector<uint8_t>& used, size_t target,
                     int num_actions, std::vector<std::vector<int>>& out) {
  if (current.size() == target) {
    out.push_back(current);
    return;
  }
  for (int a = 0; a < num_actions; ++a) {
    if (used[size_t(a)]) continue;
    used[size_t(a)] = 1;
    current.push_back(a);
    permute_subsets(current, used, target, num_actions, out);
    current.pop_back();
    used[size_t(a)] = 0;
  }
}

}  // namespace

std::vector<std::vector<int>> composite_arms(int num_actions) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  std::vector<uint8_t> used(size_t(num_actions), 0);
  for (size_t len = 1; len <= size_t(num_actions); ++len)
    permute_subsets(current, used, len, num_actions, out);
  return out;
}

int Ucb1::select() const {
  for (size_t a = 0; a < plays_.size(); ++a)
    if (plays_[a] == 0) return int(a);
  int best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < plays_.size(); ++a) {
    const double index = index_value(int(a));
    if (index > best_index) {
      best_index = index;
      best = int(a);
    }
  }
  return best;
}

double Ucb1::index_value(int arm) const {
  const long n = plays_[size_t(arm)];
  if (n == 0) return std::numeric_limits<double>::infinity();
  return sum_[size_t(arm)] / double(n) + std::sqrt(2.0 * std::log(double(total_)) / double(n));
}

}  // namespace smab
