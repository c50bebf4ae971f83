#pragma once

#include <map>
#include <string>
#include <vector>

namespace smab {

// Identifier of the constant first-stage state ("∅" in UTF-8).
inline constexpr char kInitialState[] = "\xE2\x88\x85";
inline constexpr char kStopName[] = "stop";

// Zero-mean sigma-sub-Gaussian observation noise attached to realized
// costs and terminal rewards. "gaussian" draws N(0, sigma^2);
// "bounded-uniform" draws uniformly from [-sigma, sigma].
struct NoiseModel {
  enum class Family { Gaussian, BoundedUniform };
  Family family = Family::Gaussian;
  double sigma = 0.0;
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

// Document form of an environment: the full generative model exactly as it
// is serialized. Nested maps are keyed by stage, then state id, then action
// id; probability vectors are ordered like `feedbacks`. State, action and
// feedback identifiers are opaque strings; the stop action is implicit and
// never listed.
struct EnvSpec {
  int l_max = 0;
  std::vector<std::string> states;
  std::vector<std::string> actions;
  std::vector<std::string> feedbacks;
  std::map<int, std::map<std::string, std::map<std::string, std::vector<double>>>>
      feedback_dist;
  std::map<int,
           std::map<std::string,
                    std::map<std::string, std::map<std::string, std::string>>>>
      state_map;
  std::map<int, std::map<std::string, std::map<std::string, double>>> cost_mean;
  std::map<int, std::map<std::string, double>> reward_mean;
  double c_max = 0.0;
  double r_max = 0.0;
  NoiseModel noise;
  friend bool operator==(const EnvSpec&, const EnvSpec&) = default;
};

}  // namespace smab
