#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "smab/rng.hpp"
#include "smab/types.hpp"

namespace smab {

// Two-treatment, three-stage instance with history-valued states. Stage-2
// feedback distributions after treatment 'a' followed by 'b' come from the
// joint path probabilities by conditioning; unconstrained branches are
// uniform. The first-stage terminal reward defaults to 0.
EnvSpec worked_example_env(NoiseModel noise = {NoiseModel::Family::Gaussian, 1.0});

// A set-function maximization instance: each item carries an independent
// binary latent state revealed when the item is selected, and the value of
// stopping is h(selected items, their revealed states).
struct SubmodularInstance {
  std::vector<std::string> items;
  std::vector<double> priors;  // P(state = +1) per item, each in [0, 1]
  // h(selected item indices ascending, matching +/-1 states)
  std::function<double(const std::vector<int>&, const std::vector<int>&)> value;
  NoiseModel noise{NoiseModel::Family::Gaussian, 0.0};
};

// Count of selected items whose revealed state is +1.
SubmodularInstance modular_instance(std::vector<std::string> items, std::vector<double> priors);
// Size of the union of the covering sets of selected items with state +1.
SubmodularInstance coverage_instance(std::vector<std::string> items,
                                     std::vector<std::vector<int>> sets,
                                     std::vector<double> priors);

// States are (selected set, revealed states) pairs, feedbacks are the
// revealed item states, costs are zero, and an item can only be selected once
// because selected items have no distribution entries in later states.
// Requires at most 6 items.
EnvSpec submodular_env(const SubmodularInstance& instance);

// Synthetic screening cohort configuration. Everything here is declared
// configuration with documented defaults; the emission tables are synthetic
// stand-ins chosen only to produce the intended ordering of policies.
struct ScreeningConfig {
  double prevalence = 0.0268;
  // BI-RADS score distribution per modality (MG, US, MR) and label
  // (benign, malignant); scores 1..6.
  std::array<std::array<std::array<double, 6>, 2>, 3> emissions;
  // Initial risk level distribution per label over
  // (very unlikely, unlikely, likely, very likely).
  std::array<double, 4> initial_given_benign{0.50, 0.30, 0.15, 0.05};
  std::array<double, 4> initial_given_malignant{0.10, 0.20, 0.30, 0.40};
  // Malignancy posterior per risk level used for the projected environment's
  // expected terminal rewards.
  std::array<double, 4> posterior_malignant{0.002, 0.005, 0.02, 0.55};
  double reward_detection = 10.0;
  double reward_correct_negative = 2.0;
  double reward_missed = 0.0;
  double reward_false_alarm = 0.5;
  std::array<double, 3> costs{0.2, 0.5, 0.8};  // MG below US and MR
  NoiseModel noise{NoiseModel::Family::Gaussian, 0.5};
  long cohort_sample_size = 1000;

  ScreeningConfig();
};

ScreeningConfig screening_config_from_json(const nlohmann::json& params);

struct Patient {
  bool malignant = false;
  int initial_risk = 0;  // 0..3 over the four risk levels
  bool high_density = false;
  bool high_risk = false;
};

Patient draw_patient(const ScreeningConfig& config, RngStream rng);

// Index (0..3) of the next risk level given a BI-RADS score 1..6:
// 1 -> very unlikely, 2 -> unlikely, 3 -> likely, >= 4 -> very likely.
int screening_risk_bucket(int score);

// Terminal utility component for a diagnosis against the true label.
double screening_reward(const ScreeningConfig& config, bool predicted_malignant,
                        bool actually_malignant);

// Projected environment (actions MG/US/MR, feedbacks BI-RADS 1..6, the four
// risk states plus the initial state) together with a materialized synthetic
// cohort sample drawn from `rng`.
std::pair<EnvSpec, std::vector<Patient>> screening_env(const ScreeningConfig& config,
                                                       RngStream rng);

// Builder dispatch for the named scenarios: "worked-example",
// "submodular-modular", "submodular-coverage", "screening".
EnvSpec scenario_env(const std::string& name, const nlohmann::json& params);

}  // namespace smab
