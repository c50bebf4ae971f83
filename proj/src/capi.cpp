#include "smab/smab_c.h"

#include <cstring>
#include <string>

#include "smab/analysis.hpp"
#include "smab/experiment.hpp"
#include "smab/scenarios.hpp"
#include "smab/serialize.hpp"

struct smab_env {
  smab::Env env;
  smab::GainTable table;
};

struct smab_experiment {
  smab::ExperimentResult result;
};

namespace {

thread_local std::string g_last_error;

smab_status status_of(const smab::Error& e) {
  switch (e.kind()) {
    case smab::ErrorKind::Parse: return SMAB_ERR_PARSE;
    case smab::ErrorKind::Validation: return SMAB_ERR_VALIDATION;
    case smab::ErrorKind::Config: return SMAB_ERR_CONFIG;
    case smab::ErrorKind::Contract: return SMAB_ERR_CONTRACT;
  }
  return SMAB_ERR_INTERNAL;
}

template <typename Fn>
smab_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return SMAB_OK;
  } catch (const smab::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SMAB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SMAB_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.data(), text.size() + 1);
  return out;
}

smab_env* make_env(smab::EnvSpec spec) {
  auto* handle = new smab_env{smab::Env::compile(std::move(spec)), {}};
  handle->table = smab::full_gain_table(handle->env);
  return handle;
}

}  // namespace

extern "C" {

const char* smab_last_error(void) { return g_last_error.c_str(); }

void smab_string_free(char* text) { delete[] text; }

smab_status smab_env_parse_json(const char* json_text, smab_env** out_env) {
  return guarded([&] {
    if (!json_text || !out_env) smab::throw_config("null argument");
    *out_env = make_env(smab::env_spec_from_text(json_text));
  });
}

smab_status smab_env_load_file(const char* path, smab_env** out_env) {
  return guarded([&] {
    if (!path || !out_env) smab::throw_config("null argument");
    *out_env = make_env(smab::env_spec_from_file(path));
  });
}

smab_status smab_env_from_scenario(const char* name, const char* params_json,
                                   smab_env** out_env) {
  return guarded([&] {
    if (!name || !out_env) smab::throw_config("null argument");
    nlohmann::json params;
    if (params_json && *params_json) {
      try {
        params = nlohmann::json::parse(params_json);
      } catch (const nlohmann::json::exception& e) {
        smab::throw_parse(std::string("invalid scenario parameters: ") + e.what());
      }
    }
    *out_env = make_env(smab::scenario_env(name, params));
  });
}

void smab_env_free(smab_env* env) { delete env; }

smab_status smab_env_emit_json(const smab_env* env, char** out_json) {
  return guarded([&] {
    if (!env || !out_json) smab::throw_config("null argument");
    *out_json = copy_string(smab::env_spec_to_text(env->env.spec()));
  });
}

smab_status smab_gain_table_json(const smab_env* env, char** out_json) {
  return guarded([&] {
    if (!env || !out_json) smab::throw_config("null argument");
    *out_json = copy_string(smab::gain_table_to_json(env->env, env->table).dump(2) + "\n");
  });
}

smab_status smab_bounds_json(const smab_env* env, double sigma, double delta,
                             long long horizon, char** out_json) {
  return guarded([&] {
    if (!env || !out_json) smab::throw_config("null argument");
    std::optional<double> d;
    if (delta > 0.0) d = delta;
    std::optional<long> n;
    if (horizon > 0) n = long(horizon);
    auto report = smab::theorem_bounds(env->env, env->table, sigma, d, n);
    *out_json = copy_string(smab::bound_report_to_json(env->env, report).dump(2) + "\n");
  });
}

smab_status smab_enumerate_fixed_json(const smab_env* env, long long max_sequences,
                                      char** out_json) {
  return guarded([&] {
    if (!env || !out_json) smab::throw_config("null argument");
    auto ranked = smab::enumerate_fixed_sequences(
        env->env, max_sequences > 0 ? long(max_sequences) : 1000000);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& seq : ranked) {
      nlohmann::ordered_json row;
      nlohmann::ordered_json actions = nlohmann::ordered_json::array();
      for (int a : seq.actions) actions.push_back(env->env.action_name(a));
      row["sequence"] = std::move(actions);
      row["expected_gain"] = seq.expected_gain;
      rows.push_back(std::move(row));
    }
    *out_json = copy_string(rows.dump(2) + "\n");
  });
}

smab_status smab_run_config_json(const char* config_json, smab_experiment** out_result) {
  return guarded([&] {
    if (!config_json || !out_result) smab::throw_config("null argument");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      smab::throw_parse(std::string("invalid configuration JSON: ") + e.what());
    }
    auto config = smab::experiment_config_from_json(doc);
    *out_result = new smab_experiment{smab::run_experiment(config)};
  });
}

smab_status smab_experiment_csv(const smab_experiment* result, char** out_csv) {
  return guarded([&] {
    if (!result || !out_csv) smab::throw_config("null argument");
    *out_csv = copy_string(smab::experiment_csv(result->result));
  });
}

smab_status smab_experiment_summary_json(const smab_experiment* result, char** out_json) {
  return guarded([&] {
    if (!result || !out_json) smab::throw_config("null argument");
    *out_json = copy_string(smab::experiment_summary(result->result).dump(2) + "\n");
  });
}

void smab_experiment_free(smab_experiment* result) { delete result; }

}  // extern "C"
