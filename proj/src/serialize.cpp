#include "smab/serialize.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace smab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

int parse_stage_key(const std::string& key, const char* table) {
  size_t pos = 0;
  int t = 0;
  try {
    t = std::stoi(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != key.size() || t < 1)
    throw_parse(std::string(table) + " key '" + key + "' is not a stage number");
  return t;
}

const json& require_key(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw_parse(std::string("missing key '") + key + "'");
  return *it;
}

void check_known_keys(const json& doc, const std::set<std::string>& known, const char* what) {
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!known.count(it.key()))
      throw_parse(std::string("unknown key '") + it.key() + "' in " + what);
}

std::vector<std::string> string_list(const json& v, const char* key) {
  if (!v.is_array()) throw_parse(std::string("'") + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw_parse(std::string("'") + key + "' must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw_parse("expected a number at " + where);
  return v.get<double>();
}

}  // namespace

NoiseModel noise_from_json(const json& doc) {
  if (!doc.is_object()) throw_parse("'noise' must be an object");
  check_known_keys(doc, {"family", "sigma"}, "noise");
  NoiseModel noise;
  const std::string family = require_key(doc, "family").get<std::string>();
  if (family == "gaussian")
    noise.family = NoiseModel::Family::Gaussian;
  else if (family == "bounded-uniform")
    noise.family = NoiseModel::Family::BoundedUniform;
  else
    throw_parse("unknown noise family '" + family + "'");
  noise.sigma = number(require_key(doc, "sigma"), "noise.sigma");
  return noise;
}

ordered_json noise_to_json(const NoiseModel& noise) {
  ordered_json out;
  out["family"] =
      noise.family == NoiseModel::Family::Gaussian ? "gaussian" : "bounded-uniform";
  out["sigma"] = noise.sigma;
  return out;
}

EnvSpec env_spec_from_json(const json& doc) {
  if (!doc.is_object()) throw_parse("environment document must be a JSON object");
  check_known_keys(doc,
                   {"l_max", "states", "actions", "feedbacks", "feedback_dist", "state_map",
                    "cost_mean", "reward_mean", "c_max", "r_max", "noise"},
                   "environment document");
  EnvSpec spec;
  const json& lm = require_key(doc, "l_max");
  if (!lm.is_number_integer()) throw_parse("'l_max' must be an integer");
  spec.l_max = lm.get<int>();
  spec.states = string_list(require_key(doc, "states"), "states");
  spec.actions = string_list(require_key(doc, "actions"), "actions");
  spec.feedbacks = string_list(require_key(doc, "feedbacks"), "feedbacks");
  spec.c_max = number(require_key(doc, "c_max"), "c_max");
  spec.r_max = number(require_key(doc, "r_max"), "r_max");
  spec.noise = noise_from_json(require_key(doc, "noise"));

  for (const auto& [tkey, per_state] : require_key(doc, "feedback_dist").items()) {
    int t = parse_stage_key(tkey, "feedback_dist");
    for (const auto& [xname, per_action] : per_state.items()) {
      for (const auto& [aname, vec] : per_action.items()) {
        if (!vec.is_array())
          throw_parse("feedback_dist[" + tkey + "][" + xname + "][" + aname +
                      "] must be an array");
        std::vector<double> probs;
        for (const auto& p : vec)
          probs.push_back(number(p, "feedback_dist[" + tkey + "][" + xname + "][" + aname + "]"));
        spec.feedback_dist[t][xname][aname] = std::move(probs);
      }
    }
  }
  for (const auto& [tkey, per_state] : require_key(doc, "state_map").items()) {
    int t = parse_stage_key(tkey, "state_map");
    for (const auto& [xname, per_action] : per_state.items())
      for (const auto& [aname, per_feedback] : per_action.items())
        for (const auto& [fname, target] : per_feedback.items()) {
          if (!target.is_string())
            throw_parse("state_map[" + tkey + "][" + xname + "][" + aname + "][" + fname +
                        "] must be a state id");
          spec.state_map[t][xname][aname][fname] = target.get<std::string>();
        }
  }
  for (const auto& [tkey, per_state] : require_key(doc, "cost_mean").items()) {
    int t = parse_stage_key(tkey, "cost_mean");
    for (const auto& [xname, per_action] : per_state.items())
      for (const auto& [aname, v] : per_action.items())
        spec.cost_mean[t][xname][aname] =
            number(v, "cost_mean[" + tkey + "][" + xname + "][" + aname + "]");
  }
  for (const auto& [tkey, per_state] : require_key(doc, "reward_mean").items()) {
    int t = parse_stage_key(tkey, "reward_mean");
    for (const auto& [xname, v] : per_state.items())
      spec.reward_mean[t][xname] = number(v, "reward_mean[" + tkey + "][" + xname + "]");
  }
  return spec;
}

ordered_json env_spec_to_json(const EnvSpec& spec) {
  ordered_json out;
  out["l_max"] = spec.l_max;
  out["states"] = spec.states;
  out["actions"] = spec.actions;
  out["feedbacks"] = spec.feedbacks;
  ordered_json fd = ordered_json::object();
  for (const auto& [t, per_state] : spec.feedback_dist) {
    ordered_json st = ordered_json::object();
    for (const auto& [x, per_action] : per_state) {
      ordered_json ac = ordered_json::object();
      for (const auto& [a, vec] : per_action) ac[a] = vec;
      st[x] = std::move(ac);
    }
    fd[std::to_string(t)] = std::move(st);
  }
  out["feedback_dist"] = std::move(fd);
  ordered_json sm = ordered_json::object();
  for (const auto& [t, per_state] : spec.state_map) {
    ordered_json st = ordered_json::object();
    for (const auto& [x, per_action] : per_state) {
      ordered_json ac = ordered_json::object();
      for (const auto& [a, per_feedback] : per_action) {
        ordered_json fb = ordered_json::object();
        for (const auto& [f, target] : per_feedback) fb[f] = target;
        ac[a] = std::move(fb);
      }
      st[x] = std::move(ac);
    }
    sm[std::to_string(t)] = std::move(st);
  }
  out["state_map"] = std::move(sm);
  ordered_json cm = ordered_json::object();
  for (const auto& [t, per_state] : spec.cost_mean) {
    ordered_json st = ordered_json::object();
    for (const auto& [x, per_action] : per_state) {
      ordered_json ac = ordered_json::object();
      for (const auto& [a, v] : per_action) ac[a] = v;
      st[x] = std::move(ac);
    }
    cm[std::to_string(t)] = std::move(st);
  }
  out["cost_mean"] = std::move(cm);
  ordered_json rm = ordered_json::object();
  for (const auto& [t, per_state] : spec.reward_mean) {
    ordered_json st = ordered_json::object();
    for (const auto& [x, v] : per_state) st[x] = v;
    rm[std::to_string(t)] = std::move(st);
  }
  out["reward_mean"] = std::move(rm);
  out["c_max"] = spec.c_max;
  out["r_max"] = spec.r_max;
  out["noise"] = noise_to_json(spec.noise);
  return out;
}

EnvSpec env_spec_from_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw_parse(std::string("invalid JSON: ") + e.what());
  }
  return env_spec_from_json(doc);
}

std::string env_spec_to_text(const EnvSpec& spec) { return env_spec_to_json(spec).dump(2) + "\n"; }

EnvSpec env_spec_from_file(const std::string& path) {
  return env_spec_from_text(read_text_file(path));
}

nlohmann::ordered_json gain_table_to_json(const Env& env, const GainTable& tab) {
  ordered_json states = ordered_json::array();
  for (int t = 1; t <= tab.l_max; ++t) {
    for (int x = 0; x < tab.S; ++x) {
      if (!tab.state_defined[tab.sx(t, x)]) continue;
      ordered_json entry;
      entry["t"] = t;
      entry["state"] = env.state_name(x);
      entry["reachable"] = tab.state_reachable[tab.sx(t, x)] != 0;
      entry["reward"] = env.reward_mean(t, x);
      entry["g_star"] = tab.g_star[tab.sx(t, x)];
      if (!std::isnan(tab.mu_star[tab.sx(t, x)])) entry["mu_star"] = tab.mu_star[tab.sx(t, x)];
      ordered_json optimal = ordered_json::array();
      for (int a : tab.optimal_set[tab.sx(t, x)]) optimal.push_back(env.action_name(a));
      entry["optimal_set"] = std::move(optimal);
      ordered_json actions = ordered_json::array();
      for (int a = 0; a <= tab.A; ++a) {
        const size_t j = tab.sxa(t, x, a);
        if (!tab.action_defined[j]) continue;
        ordered_json row;
        row["action"] = env.action_name(a);
        row["y"] = tab.y[j];
        row["g"] = tab.g[j];
        row["delta"] = tab.delta[j];
        if (!std::isnan(tab.mu_lower[j])) {
          row["mu_lower"] = tab.mu_lower[j];
          row["omega"] = tab.omega[j];
        }
        actions.push_back(std::move(row));
      }
      entry["actions"] = std::move(actions);
      states.push_back(std::move(entry));
    }
  }
  ordered_json out;
  out["l_max"] = tab.l_max;
  out["K"] = env.K();
  out["states"] = std::move(states);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_config("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_config("cannot write file: " + path);
  out << content;
}

}  // namespace smab
