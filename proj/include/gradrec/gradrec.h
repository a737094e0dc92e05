/*
 * gradrec - reconstruction of missing samples in frequency-sparse signals
 * by adaptive-step gradient descent on a spectral concentration measure.
 *
 * C API of the shared library. All objects are opaque handles created and
 * destroyed through these functions; every fallible call returns a
 * gradrec_status and leaves a human-readable message retrievable with
 * gradrec_last_error() on failure. Handles returned through out-parameters
 * are owned by the caller and must be released with the matching _free().
 *
 * CSV paths given as "-" write to standard output.
 */
#ifndef GRADREC_H
#define GRADREC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define GRADREC_API __declspec(dllexport)
#else
#  define GRADREC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gradrec_status {
    GRADREC_OK = 0,
    GRADREC_ERR_INVALID_ARGUMENT = 1,
    GRADREC_ERR_NULL_POINTER = 2,
    GRADREC_ERR_IO = 3,
    GRADREC_ERR_NUMERIC = 4,
    /* Distinct condition, not an error: the SNR of identical signals is
     * infinite and reported through this status instead of a number. */
    GRADREC_SNR_INFINITE = 5
} gradrec_status;

typedef struct gradrec_signal gradrec_signal;
typedef struct gradrec_mask gradrec_mask;
typedef struct gradrec_result gradrec_result;

/* Message for the most recent failure on this thread; empty string after
 * successful calls. The pointer stays valid until the next API call on the
 * same thread. */
GRADREC_API const char* gradrec_last_error(void);
GRADREC_API const char* gradrec_status_name(gradrec_status status);

/* ---- signals ---- */

/* samples[t] = sum_c amplitudes[c] * sin(2*pi*cycles[c]*t/n), t = 0..n-1.
 * cycles[c] must lie in [0, n/2). */
GRADREC_API gradrec_status gradrec_signal_generate(size_t n, const double* amplitudes,
                                                   const int* cycles, size_t num_components,
                                                   gradrec_signal** out);
GRADREC_API gradrec_status gradrec_signal_from_values(const double* values, size_t n,
                                                      gradrec_signal** out);
GRADREC_API gradrec_status gradrec_signal_length(const gradrec_signal* signal, size_t* out);
/* buffer must hold at least gradrec_signal_length() doubles. */
GRADREC_API gradrec_status gradrec_signal_copy_values(const gradrec_signal* signal,
                                                      double* buffer, size_t buffer_len);
GRADREC_API gradrec_status gradrec_signal_read_csv(const char* path, gradrec_signal** out);
GRADREC_API gradrec_status gradrec_signal_write_csv(const gradrec_signal* signal,
                                                    const char* path);
/* signal + w, w i.i.d. zero-mean Gaussian with the given variance. */
GRADREC_API gradrec_status gradrec_signal_add_noise(const gradrec_signal* signal,
                                                    double variance, uint64_t seed,
                                                    gradrec_signal** out);
GRADREC_API void gradrec_signal_free(gradrec_signal* signal);

/* ---- sampling masks ---- */

GRADREC_API gradrec_status gradrec_mask_random(size_t n, size_t num_missing, uint64_t seed,
                                               gradrec_mask** out);
GRADREC_API gradrec_status gradrec_mask_from_missing(size_t n, const size_t* missing,
                                                     size_t num_missing, gradrec_mask** out);
GRADREC_API gradrec_status gradrec_mask_length(const gradrec_mask* mask, size_t* out);
GRADREC_API gradrec_status gradrec_mask_num_missing(const gradrec_mask* mask, size_t* out);
GRADREC_API gradrec_status gradrec_mask_copy_missing(const gradrec_mask* mask, size_t* buffer,
                                                     size_t buffer_len);
GRADREC_API gradrec_status gradrec_mask_read_csv(const char* path, gradrec_mask** out);
GRADREC_API gradrec_status gradrec_mask_write_csv(const gradrec_mask* mask, const char* path);
GRADREC_API void gradrec_mask_free(gradrec_mask* mask);

/* ---- metrics ---- */

GRADREC_API gradrec_status gradrec_mae(const gradrec_signal* a, const gradrec_signal* b,
                                       double* out);
/* Returns GRADREC_SNR_INFINITE (with *out untouched) when the error energy
 * is exactly zero. */
GRADREC_API gradrec_status gradrec_snr_db(const gradrec_signal* reference,
                                          const gradrec_signal* test, double* out);
/* (1/N) sum |S(i)|^(1/p) of the signal's forward transform, p >= 1. */
GRADREC_API gradrec_status gradrec_concentration_measure(const gradrec_signal* signal,
                                                         double norm_p, double* out);

/* ---- reconstruction ---- */

typedef struct gradrec_config {
    double d0;                 /* initial probe step, > 0 */
    double mu0;                /* initial update gain, > 0 */
    double norm_p;             /* measure norm order, >= 1 */
    size_t max_iterations;     /* >= 1 */
    double amplitude_bound;    /* assumed |missing sample| bound, > 0 */
    size_t stage_length;       /* iterations per decay stage, >= 1 */
    double decay_factor;       /* both d and mu divided by this, > 1 */
    int schedule_enabled;      /* 0: constant d and mu */
    double stop_step_threshold;/* early stop when d falls below; 0 disables */
} gradrec_config;

/* Fills the default configuration: d0=10, mu0=20, p=1, 320 iterations,
 * divide by 10 every 20 iterations, amplitude bound 5, no early stop. */
GRADREC_API void gradrec_config_defaults(gradrec_config* config);

typedef struct gradrec_trace_row {
    uint64_t iteration;
    double measure;
    double mae;     /* NaN when has_mae is 0 */
    int has_mae;
    double d;
    double mu;
} gradrec_trace_row;

/* Runs the reconstruction loop. `reference` may be NULL; when given, the
 * trace carries the per-iteration mean absolute error against it. */
GRADREC_API gradrec_status gradrec_reconstruct(const gradrec_signal* observed,
                                               const gradrec_mask* mask,
                                               const gradrec_config* config,
                                               const gradrec_signal* reference,
                                               gradrec_result** out);
/* Fresh copy of the reconstructed signal; caller frees it. */
GRADREC_API gradrec_status gradrec_result_signal(const gradrec_result* result,
                                                 gradrec_signal** out);
GRADREC_API gradrec_status gradrec_result_trace_length(const gradrec_result* result,
                                                       size_t* out);
GRADREC_API gradrec_status gradrec_result_trace_row(const gradrec_result* result, size_t index,
                                                    gradrec_trace_row* out);
GRADREC_API gradrec_status gradrec_result_write_trace_csv(const gradrec_result* result,
                                                          const char* path);
/* Smallest trace MAE and the first iteration attaining it. Fails when the
 * run had no reference. Either out-pointer may be NULL. */
GRADREC_API gradrec_status gradrec_result_mae_min(const gradrec_result* result, double* mae_min,
                                                  uint64_t* iteration);
GRADREC_API gradrec_status gradrec_result_warning_count(const gradrec_result* result,
                                                        size_t* out);
/* NULL when index is out of range. */
GRADREC_API const char* gradrec_result_warning(const gradrec_result* result, size_t index);
GRADREC_API void gradrec_result_free(gradrec_result* result);

/* Grid search oracle over one missing sample: returns the value in
 * [-amplitude_bound, amplitude_bound] (stepped by grid_step) minimizing the
 * concentration measure. The mask must have exactly one missing index. */
GRADREC_API gradrec_status gradrec_brute_force_single(const gradrec_signal* observed,
                                                      const gradrec_mask* mask, double norm_p,
                                                      double amplitude_bound, double grid_step,
                                                      double* out);

/* ---- experiments ---- */

typedef struct gradrec_sweep_spec {
    size_t signal_length;
    const double* amplitudes;
    const int* cycles;
    size_t num_components;
    const double* d0;          /* parallel arrays of (d0, mu0) pairs */
    const double* mu0;
    size_t num_pairs;
    const size_t* missing_counts;
    size_t num_missing_counts;
    const uint64_t* seeds;
    size_t num_seeds;
    size_t stage_length;
    double decay_factor;
    int schedule_enabled;
    double norm_p;
    size_t max_iterations;
} gradrec_sweep_spec;

typedef struct gradrec_noise_sweep_spec {
    size_t signal_length;
    const double* amplitudes;
    const int* cycles;
    size_t num_components;
    const double* variances;   /* non-negative, ascending */
    size_t num_variances;
    const size_t* missing_counts;
    size_t num_missing_counts;
    const uint64_t* seeds;
    size_t num_seeds;
    gradrec_config engine;
}  gradrec_noise_sweep_spec;

/* Each writes per-run rows to rows_csv_path and, when summary_csv_path is
 * not NULL, per-configuration medians next to it. */
GRADREC_API gradrec_status gradrec_run_parameter_sweep(const gradrec_sweep_spec* spec,
                                                       const char* rows_csv_path,
                                                       const char* summary_csv_path);
GRADREC_API gradrec_status gradrec_run_noise_sweep(const gradrec_noise_sweep_spec* spec,
                                                   const char* rows_csv_path,
                                                   const char* summary_csv_path);

/* Built-in reference grids: a (d0,mu0) x missing-count sweep and a noise
 * variance x missing-count sweep over the standard two-tone test signal. */
GRADREC_API gradrec_status gradrec_run_table1_sweep(const uint64_t* seeds, size_t num_seeds,
                                                    const char* rows_csv_path,
                                                    const char* summary_csv_path);
GRADREC_API gradrec_status gradrec_run_table2_sweep(const uint64_t* seeds, size_t num_seeds,
                                                    const char* rows_csv_path,
                                                    const char* summary_csv_path);

/* case_id is one of "case1_constant", "case1_adaptive", "case2", "case3".
 * Writes the convergence trace and the signal overlay as CSV. */
GRADREC_API gradrec_status gradrec_emit_case_study(const char* case_id, uint64_t seed,
                                                   const char* trace_csv_path,
                                                   const char* overlay_csv_path);

#ifdef __cplusplus
}
#endif

#endif /* GRADREC_H */
