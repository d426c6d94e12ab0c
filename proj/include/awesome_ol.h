/*
 * awesome_ol.h - C interface to the Awesome-OL stream learning library.
 *
 * Every object is an opaque handle created by a *_new / *_from_* call and
 * released by the matching *_free. Functions return an aol_status; on failure
 * aol_last_error() holds a message for the calling thread until its next
 * failing call. Handles are not thread-safe; distinct handles may be used
 * from different threads.
 */
#ifndef AWESOME_OL_H
#define AWESOME_OL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(AOL_BUILDING_LIBRARY)
#    define AOL_API __declspec(dllexport)
#  else
#    define AOL_API __declspec(dllimport)
#  endif
#else
#  define AOL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aol_status {
  AOL_OK = 0,
  AOL_END_OF_STREAM = 1,
  AOL_ERR_INVALID_PRETRAIN = 10,
  AOL_ERR_MISSING_LABEL = 11,
  AOL_ERR_SCHEMA = 12,
  AOL_ERR_NOT_FITTED = 13,
  AOL_ERR_UNSUPPORTED = 14,
  AOL_ERR_NUMERIC = 15,
  AOL_ERR_PARSE = 16,
  AOL_ERR_INVALID_ARGUMENT = 17,
  AOL_ERR_REGISTRY = 18,
  AOL_ERR_CONFIG = 19,
  AOL_ERR_EMPTY_SERIES = 20,
  AOL_ERR_IO = 21,
  AOL_ERR_INTERNAL = 99
} aol_status;

typedef enum aol_drift_level { AOL_STABLE = 0, AOL_WARNING = 1, AOL_DRIFT = 2 } aol_drift_level;

AOL_API const char* aol_version(void);
AOL_API const char* aol_status_name(aol_status status);
AOL_API const char* aol_last_error(void);

/* Strings returned through char** out-parameters are owned by the caller. */
AOL_API void aol_string_free(char* s);

/* ---- experiment configuration ------------------------------------------ */

typedef struct aol_config aol_config;

AOL_API aol_status aol_config_new(aol_config** out);
AOL_API aol_status aol_config_from_json(const char* json, aol_config** out);
AOL_API aol_status aol_config_from_file(const char* path, aol_config** out);
AOL_API void aol_config_free(aol_config* config);

/* Overrides one field. Keys: out_dir, seed, n_samples, n_pretrain, n_rounds,
 * models (comma list), streams (comma list), strategy. */
AOL_API aol_status aol_config_set(aol_config* config, const char* key, const char* value);

/* Applies the AWESOME_OL_OUT fallback, validates, and instantiates every job
 * once without running it, so configuration problems surface here. */
AOL_API aol_status aol_config_finalize(aol_config* config);

/* Effective config as JSON (caller frees with aol_string_free). */
AOL_API aol_status aol_config_to_json(const aol_config* config, char** json_out);

/* ---- running ------------------------------------------------------------- */

typedef struct aol_run aol_run;

/* Runs every job and writes records, summary, plots and manifest into
 * out_dir. Returns AOL_OK when the pipeline completed, even if some jobs
 * failed; see aol_run_exit_code. */
AOL_API aol_status aol_run_experiment(const aol_config* config, size_t parallelism, aol_run** out);
AOL_API int aol_run_exit_code(const aol_run* run);
AOL_API const char* aol_run_summary(const aol_run* run);
AOL_API size_t aol_run_job_count(const aol_run* run);
AOL_API size_t aol_run_failed_count(const aol_run* run);
AOL_API void aol_run_free(aol_run* run);

/* Registered models, strategies, streams and detectors, one per line. The
 * string is static. */
AOL_API const char* aol_list_components(void);

/* Re-renders a comparison SVG from records CSV files. */
AOL_API aol_status aol_compare(const char* const* record_files, size_t n_files, const char* out_svg, size_t window,
                               char** summary_out);

/* ---- learners ------------------------------------------------------------ */

typedef struct aol_learner aol_learner;

/* n_classes == 0 builds a regression learner. params_json may be NULL. */
AOL_API aol_status aol_learner_new(const char* name, const char* params_json, size_t n_features, size_t n_classes,
                                   uint64_t seed, aol_learner** out);
AOL_API void aol_learner_free(aol_learner* learner);
/* Row-major features (n_rows x n_features); labels are class ids or targets. */
AOL_API aol_status aol_learner_fit(aol_learner* learner, const double* features, const double* labels, size_t n_rows,
                                   size_t n_features);
AOL_API aol_status aol_learner_partial_fit(aol_learner* learner, const double* features, size_t n_features, double label);
/* Class id (as a double) or regression estimate. */
AOL_API aol_status aol_learner_predict(const aol_learner* learner, const double* features, size_t n_features,
                                       double* out);
AOL_API aol_status aol_learner_predict_proba(const aol_learner* learner, const double* features, size_t n_features,
                                             double* proba, size_t n_classes);
AOL_API aol_status aol_learner_n_seen(const aol_learner* learner, size_t* out);

/* ---- streams ------------------------------------------------------------- */

typedef struct aol_stream aol_stream;

AOL_API aol_status aol_stream_new(const char* name, const char* params_json, uint64_t seed, aol_stream** out);
AOL_API void aol_stream_free(aol_stream* stream);
/* n_classes is 0 for regression streams. */
AOL_API aol_status aol_stream_shape(const aol_stream* stream, size_t* n_features, size_t* n_classes);
/* Returns AOL_END_OF_STREAM once exhausted. */
AOL_API aol_status aol_stream_next(aol_stream* stream, double* features, size_t n_features, double* label,
                                   size_t* index);

/* ---- drift detectors ----------------------------------------------------- */

typedef struct aol_detector aol_detector;

AOL_API aol_status aol_detector_new(const char* name, const char* params_json, aol_detector** out);
AOL_API void aol_detector_free(aol_detector* detector);
AOL_API aol_status aol_detector_update(aol_detector* detector, double value, aol_drift_level* level);
AOL_API aol_status aol_detector_reset(aol_detector* detector);

#ifdef __cplusplus
}
#endif

#endif /* AWESOME_OL_H */
