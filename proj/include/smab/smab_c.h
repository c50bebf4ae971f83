/* C interface to the staged-bandit simulator. Handles are opaque; every
 * function returns a status code and reports details through
 * smab_last_error(), which is valid on the calling thread until the next
 * library call. Strings returned through out-parameters are heap-allocated
 * and must be released with smab_string_free(). */
#ifndef SMAB_C_H
#define SMAB_C_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smab_status {
  SMAB_OK = 0,
  SMAB_ERR_PARSE = 1,      /* malformed JSON or wrong document shape */
  SMAB_ERR_VALIDATION = 2, /* environment invariant violated */
  SMAB_ERR_CONFIG = 3,     /* bad configuration or missing table entry */
  SMAB_ERR_CONTRACT = 4,   /* engine/policy contract violation */
  SMAB_ERR_INTERNAL = 5
} smab_status;

typedef struct smab_env smab_env;
typedef struct smab_experiment smab_experiment;

const char* smab_last_error(void);
void smab_string_free(char* text);

/* Environment handles: parsing validates every invariant and precomputes the
 * gain quantities. */
smab_status smab_env_parse_json(const char* json_text, smab_env** out_env);
smab_status smab_env_load_file(const char* path, smab_env** out_env);
smab_status smab_env_from_scenario(const char* name, const char* params_json,
                                   smab_env** out_env);
void smab_env_free(smab_env* env);

smab_status smab_env_emit_json(const smab_env* env, char** out_json);
smab_status smab_gain_table_json(const smab_env* env, char** out_json);

/* Regret-bound report. Pass delta <= 0 to skip the fixed-confidence total and
 * horizon <= 0 to skip the horizon-tuned totals. */
smab_status smab_bounds_json(const smab_env* env, double sigma, double delta,
                             long long horizon, char** out_json);

/* Ranked expected gains of all fixed continuation sequences; refuses when the
 * count exceeds max_sequences. */
smab_status smab_enumerate_fixed_json(const smab_env* env, long long max_sequences,
                                      char** out_json);

/* Runs the experiment described by a configuration document. */
smab_status smab_run_config_json(const char* config_json, smab_experiment** out_result);
smab_status smab_experiment_csv(const smab_experiment* result, char** out_csv);
smab_status smab_experiment_summary_json(const smab_experiment* result, char** out_json);
void smab_experiment_free(smab_experiment* result);

#ifdef __cplusplus
}
#endif

#endif /* SMAB_C_H */
