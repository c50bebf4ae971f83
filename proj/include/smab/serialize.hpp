#pragma once

#include <string>

#include "json.hpp"
#include "smab/env.hpp"
#include "smab/gain_table.hpp"

namespace smab {

// Environment documents round-trip through JSON with top-level keys
// l_max, states, actions, feedbacks, feedback_dist, state_map, cost_mean,
// reward_mean, c_max, r_max, noise. Parsing is strict: unknown or missing
// keys are reported as parse errors; parse -> emit -> parse is
// value-identical.
EnvSpec env_spec_from_json(const nlohmann::json& doc);
nlohmann::ordered_json env_spec_to_json(const EnvSpec& spec);
EnvSpec env_spec_from_text(const std::string& text);
std::string env_spec_to_text(const EnvSpec& spec);
EnvSpec env_spec_from_file(const std::string& path);

NoiseModel noise_from_json(const nlohmann::json& doc);
nlohmann::ordered_json noise_to_json(const NoiseModel& noise);

nlohmann::ordered_json gain_table_to_json(const Env& env, const GainTable& table);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace smab
