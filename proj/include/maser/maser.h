/*
 * C interface to the three-level maser thermodynamics library.
 *
 * Every function returns a maser_status; MASER_OK is zero. On failure a
 * human-readable message is available from maser_last_error() on the calling
 * thread until the next failing call. Handles are opaque and owned by the
 * caller, who releases them with the matching *_destroy function.
 *
 * Density matrices are exchanged as 9 real and 9 imaginary parts in
 * row-major order over the basis (g, u, l).
 */
#ifndef MASER_MASER_H
#define MASER_MASER_H

#include <stddef.h>
#include <stdint.h>

#if defined(MASER_BUILDING_LIBRARY)
#define MASER_API __attribute__((visibility("default")))
#else
#define MASER_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum maser_status {
  MASER_OK = 0,
  MASER_ERR_INVALID_PARAMS = 1,
  MASER_ERR_INVALID_ARGUMENT = 2,
  MASER_ERR_DEGENERATE_NULL_SPACE = 3,
  MASER_ERR_STEP_UNDERFLOW = 4,
  MASER_ERR_NON_PHYSICAL_STATE = 5,
  MASER_ERR_QUADRATURE = 6,
  MASER_ERR_UNDEFINED_TEMPERATURE = 7,
  MASER_ERR_NOT_ENGINE_REGIME = 8,
  MASER_ERR_IO = 9,
  MASER_ERR_CONFIG = 10,
  MASER_ERR_NOT_FOUND = 11,
  MASER_ERR_BUFFER_TOO_SMALL = 12,
  MASER_ERR_INTERNAL = 99
} maser_status;

typedef enum maser_bath { MASER_BATH_U = 0, MASER_BATH_L = 1 } maser_bath;

typedef enum maser_flow_convention {
  MASER_FLOWS_BARE = 0,
  MASER_FLOWS_FULL = 1
} maser_flow_convention;

typedef enum maser_temperature_convention {
  MASER_TEMPERATURE_NAIVE = 0,
  MASER_TEMPERATURE_CORRECTED = 1
} maser_temperature_convention;

typedef enum maser_entropy_convention {
  MASER_ENTROPY_BARE = 0,
  MASER_ENTROPY_FULL_CORRECTED = 1,
  MASER_ENTROPY_FULL_NAIVE = 2
} maser_entropy_convention;

typedef enum maser_state_source {
  MASER_STATE_ANALYTIC = 0,
  MASER_STATE_NULLSPACE = 1,
  MASER_STATE_EVOLVED = 2
} maser_state_source;

typedef struct maser_params {
  double omega_u;
  double omega_l;
  double omega_d;
  double epsilon;
  double gamma_u;
  double gamma_l;
  double n_u;
  double n_l;
} maser_params;

typedef struct maser_flows {
  double power;
  double heat_u;
  double heat_l;
} maser_flows;

typedef struct maser_efficiency {
  double eta;
  double carnot_bound;
  int satisfied;
} maser_efficiency;

typedef struct maser_sweep_summary {
  size_t rows;
  size_t invariant_failures;
  size_t naive_violations;
} maser_sweep_summary;

typedef struct maser_model maser_model;
typedef struct maser_config maser_config;
typedef struct maser_record maser_record;
typedef struct maser_report maser_report;

MASER_API const char* maser_version(void);
MASER_API const char* maser_last_error(void);

/* Model: a validated parameter set. */
MASER_API maser_status maser_model_create(const maser_params* params,
                                          maser_model** out);
MASER_API void maser_model_destroy(maser_model* model);
MASER_API maser_status maser_model_params(const maser_model* model,
                                          maser_params* out);
MASER_API maser_status maser_model_detuning(const maser_model* model, double* out);
MASER_API maser_status maser_model_steady_state(const maser_model* model,
                                                maser_state_source source,
                                                double re[9], double im[9]);
MASER_API maser_status maser_model_rate(const maser_model* model, double* out);
MASER_API maser_status maser_model_af(const maser_model* model, double* a,
                                      double* f);
MASER_API maser_status maser_model_flows(const maser_model* model,
                                         maser_flow_convention convention,
                                         maser_flows* out);
MASER_API maser_status maser_model_effective_energies(const maser_model* model,
                                                      double* omega_tilde_u,
                                                      double* omega_tilde_l);
MASER_API maser_status maser_model_temperature(
    const maser_model* model, maser_bath bath,
    maser_temperature_convention convention, double* out);
MASER_API maser_status maser_model_entropy_production(
    const maser_model* model, maser_entropy_convention convention, double* out);
MASER_API maser_status maser_model_efficiency(const maser_model* model,
                                              maser_efficiency* out);
MASER_API maser_status maser_model_greens_rate(const maser_model* model,
                                               double population_difference,
                                               double* out);
MASER_API maser_status maser_model_mean_transition_energy(
    const maser_model* model, double* omega_u_mean);

/* Configuration: flat key = value store (see README for the key list). */
MASER_API maser_status maser_config_create(maser_config** out);
MASER_API void maser_config_destroy(maser_config* config);
MASER_API maser_status maser_config_load_file(maser_config* config,
                                              const char* path);
/* Replaces earlier values of key. */
MASER_API maser_status maser_config_set(maser_config* config, const char* key,
                                        const char* value);
/* Appends a value; used for repeated keys such as "sweep". */
MASER_API maser_status maser_config_append(maser_config* config,
                                           const char* key, const char* value);
MASER_API maser_status maser_config_erase(maser_config* config, const char* key);
/* Checks that the configuration parses into a complete run description. */
MASER_API maser_status maser_config_validate(const maser_config* config);
MASER_API maser_status maser_config_base_params(const maser_config* config,
                                                maser_params* out);

/* Evaluate the base point of a configuration. */
MASER_API maser_status maser_point(const maser_config* config,
                                   maser_record** out);
MASER_API void maser_record_destroy(maser_record* record);
MASER_API int maser_record_all_ok(const maser_record* record);
/* Column value by CSV column name; returns MASER_ERR_NOT_FOUND for empty
 * (not applicable) fields. Flags read back as 0.0 or 1.0. */
MASER_API maser_status maser_record_get(const maser_record* record,
                                        const char* column, double* out);
/* snprintf-style: writes at most capacity bytes including the terminator and
 * reports the full length (excluding terminator) in *needed. */
MASER_API maser_status maser_record_format_csv(const maser_record* record,
                                               int with_header, char* buffer,
                                               size_t capacity, size_t* needed);

/* Grid sweep to the configured output path. */
MASER_API maser_status maser_sweep(const maser_config* config,
                                   maser_sweep_summary* summary);

/* Random search for sigma_full_naive < 0 in the engine regime.
 * Returns MASER_ERR_NOT_FOUND when the budget is exhausted. */
MASER_API maser_status maser_find_violation(const maser_config* config,
                                            maser_record** out,
                                            uint64_t* samples_tried,
                                            int* reverified);

/* Runs every cross-check at the configured base point. */
MASER_API maser_status maser_verify(const maser_config* config,
                                    maser_report** out);
MASER_API void maser_report_destroy(maser_report* report);
MASER_API int maser_report_all_passed(const maser_report* report);
MASER_API size_t maser_report_size(const maser_report* report);
MASER_API maser_status maser_report_check(const maser_report* report,
                                          size_t index, const char** name,
                                          int* passed, int* applicable,
                                          double* residual, double* tolerance);
MASER_API maser_status maser_report_format(const maser_report* report,
                                           char* buffer, size_t capacity,
                                           size_t* needed);

/* Header comment lines (tool version, seed, config echo) for a command. */
MASER_API maser_status maser_format_header(const maser_config* config,
                                           const char* command, char* buffer,
                                           size_t capacity, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* MASER_MASER_H */
