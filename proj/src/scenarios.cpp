#include "smab/scenarios.hpp"

#include <bit>
#include <cmath>

#include "smab/serialize.hpp"

namespace smab {

using nlohmann::json;

EnvSpec worked_example_env(NoiseModel noise) {
  const std::vector<std::string> acts{"a", "b"};
  const std::vector<std::string> fbs{"-1", "1"};
  auto h2 = [](const std::string& a, const std::string& f) { return "(" + a + "," + f + ")"; };
  auto h3 = [](const std::string& a1, const std::string& a2, const std::string& f1,
               const std::string& f2) {
    return "((" + a1 + "," + a2 + "),(" + f1 + "," + f2 + "))";
  };

  EnvSpec spec;
  spec.l_max = 3;
  spec.actions = acts;
  spec.feedbacks = fbs;
  spec.states.push_back(kInitialState);
  for (const auto& a : acts)
    for (const auto& f : fbs) spec.states.push_back(h2(a, f));
  for (const auto& a1 : acts)
    for (const auto& a2 : acts)
      for (const auto& f1 : fbs)
        for (const auto& f2 : fbs) spec.states.push_back(h3(a1, a2, f1, f2));

  // First-stage outcomes are even coin flips for both treatments.
  for (const auto& a : acts) {
    spec.feedback_dist[1][kInitialState][a] = {0.5, 0.5};
    spec.cost_mean[1][kInitialState][a] = 1.0;
    for (const auto& f : fbs) spec.state_map[1][kInitialState][a][f] = h2(a, f);
  }
  // Second-stage distributions: the (a then b) joint path probabilities
  // 0.3/0.2/0.4/0.1 conditioned on the first feedback; other branches are
  // unconstrained and uniform.
  for (const auto& a1 : acts) {
    for (const auto& f1 : fbs) {
      const std::string x = h2(a1, f1);
      for (const auto& a2 : acts) {
        std::vector<double> probs{0.5, 0.5};
        if (a1 == "a" && a2 == "b") probs = f1 == "1" ? std::vector<double>{0.2, 0.8}
                                                      : std::vector<double>{0.6, 0.4};
        spec.feedback_dist[2][x][a2] = probs;
        spec.cost_mean[2][x][a2] = 1.0;
        for (const auto& f2 : fbs) spec.state_map[2][x][a2][f2] = h3(a1, a2, f1, f2);
      }
    }
  }

  spec.reward_mean[1][kInitialState] = 0.0;
  spec.reward_mean[2][h2("a", "1")] = 12.0;
  spec.reward_mean[2][h2("a", "-1")] = 0.0;
  spec.reward_mean[2][h2("b", "1")] = 6.0;
  spec.reward_mean[2][h2("b", "-1")] = 0.0;
  for (const auto& a1 : acts)
    for (const auto& a2 : acts)
      for (const auto& f1 : fbs)
        for (const auto& f2 : fbs) spec.reward_mean[3][h3(a1, a2, f1, f2)] = 0.0;
  spec.reward_mean[3][h3("a", "b", "1", "1")] = 13.0;
  spec.reward_mean[3][h3("a", "b", "1", "-1")] = 12.0;
  spec.reward_mean[3][h3("a", "b", "-1", "1")] = 10.0;
  spec.reward_mean[3][h3("a", "b", "-1", "-1")] = 9.0;

  spec.c_max = 1.0;
  spec.r_max = 13.0;
  spec.noise = noise;
  return spec;
}

SubmodularInstance modular_instance(std::vector<std::string> items, std::vector<double> priors) {
  SubmodularInstance inst;
  inst.items = std::move(items);
  inst.priors = std::move(priors);
  inst.value = [](const std::vector<int>&, const std::vector<int>& signs) {
    double v = 0.0;
    for (int s : signs) v += s > 0 ? 1.0 : 0.0;
    return v;
  };
  return inst;
}

SubmodularInstance coverage_instance(std::vector<std::string> items,
                                     std::vector<std::vector<int>> sets,
                                     std::vector<double> priors) {
  if (sets.size() != items.size())
    throw_config("coverage instance needs one covering set per item");
  SubmodularInstance inst;
  inst.items = std::move(items);
  inst.priors = std::move(priors);
  inst.value = [sets = std::move(sets)](const std::vector<int>& members,
                                        const std::vector<int>& signs) {
    std::vector<int> covered;
    for (size_t i = 0; i < members.size(); ++i) {
      if (signs[i] <= 0) continue;
      for (int e : sets[size_t(members[i])])
        if (std::find(covered.begin(), covered.end(), e) == covered.end()) covered.push_back(e);
    }
    return double(covered.size());
  };
  return inst;
}

namespace {

std::string submodular_state_name(const SubmodularInstance& inst, uint32_t mask,
                                  uint32_t plus_bits) {
  if (mask == 0) return kInitialState;
  std::string out = "{";
  bool first = true;
  for (size_t i = 0; i < inst.items.size(); ++i) {
    if (!(mask & (1u << i))) continue;
    if (!first) out += ",";
    first = false;
    out += inst.items[i] + ((plus_bits >> i) & 1u ? ":+" : ":-");
  }
  return out + "}";
}

double submodular_value(const SubmodularInstance& inst, uint32_t mask, uint32_t plus_bits) {
  std::vector<int> members, signs;
  for (size_t i = 0; i < inst.items.size(); ++i) {
    if (!(mask & (1u << i))) continue;
    members.push_back(int(i));
    signs.push_back((plus_bits >> i) & 1u ? 1 : -1);
  }
  double v = inst.value(members, signs);
  if (!(v >= 0.0)) throw_config("set function values must be nonnegative");
  return v;
}

}  // namespace

EnvSpec submodular_env(const SubmodularInstance& inst) {
  const int n = int(inst.items.size());
  if (n > 6) throw_config("submodular_env supports at most 6 items");
  if (inst.priors.size() != inst.items.size())
    throw_config("submodular instance needs one prior per item");
  for (double q : inst.priors)
    if (!(q >= 0.0 && q <= 1.0)) throw_config("item state priors must lie in [0, 1]");
  if (!inst.value) throw_config("submodular instance has no set function");

  EnvSpec spec;
  spec.l_max = n + 1;
  spec.actions = n > 0 ? inst.items : std::vector<std::string>{"noop"};
  spec.feedbacks = {"-1", "1"};
  spec.c_max = 0.0;
  spec.noise = inst.noise;

  double r_max = 0.0;
  spec.states.push_back(kInitialState);
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    // every sign assignment over the selected set
    uint32_t plus = mask;
    while (true) {
      spec.states.push_back(submodular_state_name(inst, mask, plus));
      if (plus == 0) break;
      plus = (plus - 1) & mask;
    }
  }
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int t = std::popcount(mask) + 1;
    uint32_t plus = mask;
    while (true) {
      const std::string name = submodular_state_name(inst, mask, plus);
      const double v = submodular_value(inst, mask, plus);
      spec.reward_mean[t][name] = v;
      r_max = std::max(r_max, v);
      if (t <= spec.l_max - 1) {
        for (int i = 0; i < n; ++i) {
          if (mask & (1u << i)) continue;
          const double q = inst.priors[size_t(i)];
          spec.feedback_dist[t][name][inst.items[size_t(i)]] = {1.0 - q, q};
          spec.cost_mean[t][name][inst.items[size_t(i)]] = 0.0;
          spec.state_map[t][name][inst.items[size_t(i)]]["-1"] =
              submodular_state_name(inst, mask | (1u << i), plus);
          spec.state_map[t][name][inst.items[size_t(i)]]["1"] =
              submodular_state_name(inst, mask | (1u << i), plus | (1u << i));
        }
      }
      if (plus == 0) break;
      plus = (plus - 1) & mask;
    }
  }
  spec.r_max = r_max;
  return spec;
}

ScreeningConfig::ScreeningConfig() {
  emissions = {{
      // MG: benign, malignant
      {{{0.55, 0.25, 0.188, 0.008, 0.003, 0.001}, {0.05, 0.10, 0.15, 0.35, 0.25, 0.10}}},
      // US
      {{{0.58, 0.24, 0.168, 0.008, 0.003, 0.001}, {0.04, 0.08, 0.13, 0.33, 0.28, 0.14}}},
      // MR
      {{{0.60, 0.25, 0.140, 0.006, 0.003, 0.001}, {0.02, 0.05, 0.08, 0.33, 0.33, 0.19}}},
  }};
}

namespace {

std::array<double, 6> emission_row(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 6)
    throw_parse("emission table at " + where + " must hold 6 score probabilities");
  std::array<double, 6> out{};
  for (size_t i = 0; i < 6; ++i) out[i] = v[i].get<double>();
  return out;
}

template <size_t N>
std::array<double, N> fixed_array(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != N)
    throw_parse("'" + where + "' must hold " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (size_t i = 0; i < N; ++i) out[i] = v[i].get<double>();
  return out;
}

}  // namespace

ScreeningConfig screening_config_from_json(const json& params) {
  ScreeningConfig cfg;
  if (params.is_null()) return cfg;
  if (!params.is_object()) throw_parse("screening parameters must be an object");
  static const std::array<std::string, 3> modalities{"MG", "US", "MR"};
  for (const auto& [key, value] : params.items()) {
    if (key == "prevalence")
      cfg.prevalence = value.get<double>();
    else if (key == "emissions") {
      for (const auto& [mod, rows] : value.items()) {
        size_t m = 0;
        while (m < modalities.size() && modalities[m] != mod) ++m;
        if (m == modalities.size()) throw_parse("unknown modality '" + mod + "' in emissions");
        cfg.emissions[m][0] = emission_row(rows.at("benign"), mod + ".benign");
        cfg.emissions[m][1] = emission_row(rows.at("malignant"), mod + ".malignant");
      }
    } else if (key == "initial_given_benign")
      cfg.initial_given_benign = fixed_array<4>(value, key);
    else if (key == "initial_given_malignant")
      cfg.initial_given_malignant = fixed_array<4>(value, key);
    else if (key == "posterior_malignant")
      cfg.posterior_malignant = fixed_array<4>(value, key);
    else if (key == "reward_detection")
      cfg.reward_detection = value.get<double>();
    else if (key == "reward_correct_negative")
      cfg.reward_correct_negative = value.get<double>();
    else if (key == "reward_missed")
      cfg.reward_missed = value.get<double>();
    else if (key == "reward_false_alarm")
      cfg.reward_false_alarm = value.get<double>();
    else if (key == "costs")
      cfg.costs = fixed_array<3>(value, key);
    else if (key == "noise")
      cfg.noise = noise_from_json(value);
    else if (key == "cohort_sample_size")
      cfg.cohort_sample_size = value.get<long>();
    else
      throw_parse("unknown screening parameter '" + key + "'");
  }
  return cfg;
}

int screening_risk_bucket(int score) {
  if (score <= 1) return 0;
  if (score == 2) return 1;
  if (score == 3) return 2;
  return 3;
}

double screening_reward(const ScreeningConfig& cfg, bool predicted_malignant,
                        bool actually_malignant) {
  if (actually_malignant)
    return predicted_malignant ? cfg.reward_detection : cfg.reward_missed;
  return predicted_malignant ? cfg.reward_false_alarm : cfg.reward_correct_negative;
}

Patient draw_patient(const ScreeningConfig& cfg, RngStream rng) {
  Patient p;
  p.malignant = rng.next_uniform() < cfg.prevalence;
  const auto& dist = p.malignant ? cfg.initial_given_malignant : cfg.initial_given_benign;
  p.initial_risk = rng.sample_index(std::span<const double>(dist.data(), dist.size()));
  p.high_density = p.initial_risk >= 2;
  p.high_risk = p.initial_risk == 3;
  return p;
}

std::pair<EnvSpec, std::vector<Patient>> screening_env(const ScreeningConfig& cfg,
                                                       RngStream rng) {
  if (!(cfg.prevalence > 0.0 && cfg.prevalence < 1.0))
    throw_config("prevalence must be in (0, 1)");
  for (const auto& modality : cfg.emissions)
    for (const auto& row : modality) {
      double sum = 0.0;
      for (double p : row) {
        if (p < 0.0) throw_config("emission probabilities must be nonnegative");
        sum += p;
      }
      if (std::fabs(sum - 1.0) > 1e-9)
        throw_config("emission rows must sum to 1");
    }
  for (double q : cfg.posterior_malignant)
    if (!(q >= 0.0 && q <= 1.0)) throw_config("posterior_malignant entries must lie in [0, 1]");

  const std::vector<std::string> risk{"very unlikely", "unlikely", "likely", "very likely"};
  EnvSpec spec;
  spec.l_max = 4;
  spec.actions = {"MG", "US", "MR"};
  for (int s = 1; s <= 6; ++s) spec.feedbacks.push_back(std::to_string(s));
  spec.states.push_back(kInitialState);
  for (const auto& r : risk) spec.states.push_back(r);

  auto posterior = [&](int state_index) {
    return state_index == 0 ? cfg.prevalence : cfg.posterior_malignant[size_t(state_index - 1)];
  };
  // Stopping in the top risk level is read as a malignant call, anywhere
  // else as a benign call.
  auto stop_value = [&](int state_index) {
    const double p = posterior(state_index);
    const bool call_malignant = state_index == 4;
    return p * screening_reward(cfg, call_malignant, true) +
           (1.0 - p) * screening_reward(cfg, call_malignant, false);
  };

  for (int t = 1; t <= spec.l_max; ++t)
    for (int x = 0; x < 5; ++x)
      spec.reward_mean[t][spec.states[size_t(x)]] = stop_value(x);

  for (int t = 1; t <= spec.l_max - 1; ++t) {
    for (int x = 0; x < 5; ++x) {
      const std::string& xname = spec.states[size_t(x)];
      const double p = posterior(x);
      for (size_t a = 0; a < spec.actions.size(); ++a) {
        std::vector<double> probs(6, 0.0);
        for (size_t f = 0; f < 6; ++f)
          probs[f] = p * cfg.emissions[a][1][f] + (1.0 - p) * cfg.emissions[a][0][f];
        spec.feedback_dist[t][xname][spec.actions[a]] = probs;
        spec.cost_mean[t][xname][spec.actions[a]] = cfg.costs[a];
        for (int score = 1; score <= 6; ++score)
          spec.state_map[t][xname][spec.actions[a]][std::to_string(score)] =
              risk[size_t(screening_risk_bucket(score))];
      }
    }
  }

  spec.c_max = std::max({cfg.costs[0], cfg.costs[1], cfg.costs[2]});
  spec.r_max = std::max({cfg.reward_detection, cfg.reward_correct_negative, cfg.reward_missed,
                         cfg.reward_false_alarm});
  spec.noise = cfg.noise;

  std::vector<Patient> cohort;
  cohort.reserve(size_t(cfg.cohort_sample_size));
  for (long i = 0; i < cfg.cohort_sample_size; ++i)
    cohort.push_back(draw_patient(cfg, rng.derive(uint64_t(i))));
  return {std::move(spec), std::move(cohort)};
}

EnvSpec scenario_env(const std::string& name, const json& params) {
  auto get_noise = [&](NoiseModel fallback) {
    if (params.is_object() && params.contains("noise")) return noise_from_json(params["noise"]);
    return fallback;
  };
  auto get_items = [&](std::vector<std::string> fallback) {
    if (params.is_object() && params.contains("items"))
      return params["items"].get<std::vector<std::string>>();
    return fallback;
  };
  auto get_priors = [&](size_t count) {
    if (params.is_object() && params.contains("priors"))
      return params["priors"].get<std::vector<double>>();
    return std::vector<double>(count, 0.5);
  };

  if (name == "worked-example")
    return worked_example_env(get_noise({NoiseModel::Family::Gaussian, 1.0}));
  if (name == "submodular-modular") {
    auto items = get_items({"i1", "i2", "i3"});
    auto inst = modular_instance(items, get_priors(items.size()));
    inst.noise = get_noise(inst.noise);
    return submodular_env(inst);
  }
  if (name == "submodular-coverage") {
    auto items = get_items({"s1", "s2", "s3"});
    std::vector<std::vector<int>> sets{{1, 2}, {2, 3}, {4}};
    if (params.is_object() && params.contains("sets"))
      sets = params["sets"].get<std::vector<std::vector<int>>>();
    auto inst = coverage_instance(items, sets, get_priors(items.size()));
    inst.noise = get_noise(inst.noise);
    return submodular_env(inst);
  }
  if (name == "screening") {
    ScreeningConfig cfg = screening_config_from_json(params);
    return screening_env(cfg, RngStream(0)).first;
  }
  throw_config("unknown scenario '" + name + "'");
}

}  // namespace smab
