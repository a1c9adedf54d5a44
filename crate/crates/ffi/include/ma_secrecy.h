#ifndef MA_SECRECY_H
#define MA_SECRECY_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MasStatus {
  MAS_STATUS_OK = 0,
  MAS_STATUS_NULL_POINTER = 1,
  MAS_STATUS_INVALID_ARGUMENT = 2,
  MAS_STATUS_CONSTRAINT_VIOLATION = 3,
  MAS_STATUS_DEGENERATE_INPUT = 4,
  MAS_STATUS_NO_NULL_SPACE = 5,
  MAS_STATUS_INFEASIBLE = 6,
  MAS_STATUS_PACKING_INFEASIBLE = 7,
  MAS_STATUS_CONFIG = 8,
  MAS_STATUS_IO = 9,
  MAS_STATUS_PANIC = 10,
} MasStatus;

typedef enum MasAxis {
  MAS_AXIS_GAMMA = 0,
  MAS_AXIS_REGION_SIZE = 1,
} MasAxis;

/**
 * Opaque experiment configuration.
 */
typedef struct MasConfig MasConfig;

/**
 * Opaque multipath description.
 */
typedef struct MasPathSet MasPathSet;

/**
 * Opaque sweep result.
 */
typedef struct MasSweep MasSweep;

typedef struct MasTrialSummary {
  uint64_t seed;
  double ma_channel_power;
  double fpa_channel_power;
  double ma_signal_power;
  double fpa_signal_power;
  double ma_rate;
  double fpa_rate;
  double ma_correlation;
  double fpa_correlation;
  bool ma_feasible;
  bool fpa_feasible;
  bool an_disabled;
  uint32_t iterations;
} MasTrialSummary;

typedef struct MasSummaryRow {
  double axis_value;
  double ma_mean;
  double ma_std;
  double fpa_mean;
  double fpa_std;
  double infeasible_frac;
} MasSummaryRow;

typedef struct MasGradientConfig {
  uint32_t max_iterations;
  double initial_step;
  double min_step;
  double convergence_tol;
} MasGradientConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after success.
 * The pointer stays valid until the next library call on this thread.
 */
const char *mas_last_error_message(void);

/**
 * Configuration with every field at its default.
 */
struct MasConfig *mas_config_default(void);

/**
 * Parse a JSON configuration.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MasStatus mas_config_from_json(const char *json, struct MasConfig **out);

/**
 * # Safety
 * `cfg` must come from this library and not be used afterwards.
 */
void mas_config_free(struct MasConfig *cfg);

/**
 * Run trial `trial_index` of the configured experiment.
 *
 * # Safety
 * `cfg` and `out` must be valid pointers.
 */
enum MasStatus mas_run_trial(const struct MasConfig *cfg,
                             uint64_t trial_index,
                             struct MasTrialSummary *out);

/**
 * Run a sweep over `axis`.
 *
 * # Safety
 * `cfg` and `out` must be valid pointers.
 */
enum MasStatus mas_sweep(const struct MasConfig *cfg, enum MasAxis axis, struct MasSweep **out);

/**
 * Number of summary rows; zero for a null handle.
 *
 * # Safety
 * `sweep` must be null or a valid handle.
 */
size_t mas_sweep_len(const struct MasSweep *sweep);

/**
 * # Safety
 * `sweep` and `out` must be valid pointers.
 */
enum MasStatus mas_sweep_row(const struct MasSweep *sweep, size_t index, struct MasSummaryRow *out);

/**
 * # Safety
 * `sweep` must come from this library and not be used afterwards.
 */
void mas_sweep_free(struct MasSweep *sweep);

/**
 * Draw a random path set.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MasStatus mas_path_set_sample(uint64_t seed,
                                   size_t num_paths,
                                   double path_loss_db,
                                   double wavelength,
                                   struct MasPathSet **out);

/**
 * # Safety
 * `paths` must come from this library and not be used afterwards.
 */
void mas_path_set_free(struct MasPathSet *paths);

/**
 * Channel coefficient at `(x, y)`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum MasStatus mas_evaluate_channel(const struct MasPathSet *paths,
                                    double x,
                                    double y,
                                    double *re,
                                    double *im);

/**
 * `Σ_n |h(t_n)|²` for `n` interleaved positions.
 *
 * # Safety
 * `xy` must hold `2 n` doubles; other pointers must be valid.
 */
enum MasStatus mas_channel_power(const struct MasPathSet *paths,
                                 const double *xy,
                                 size_t n,
                                 double *out);

/**
 * Gradient-ascent position optimization. `xy` holds the initial layout
 * and receives the optimized one. `cfg` may be null for defaults.
 *
 * # Safety
 * `xy` must hold `2 n` writable doubles; `paths` must be valid; the
 * output pointers may be null.
 */
enum MasStatus mas_optimize_positions(const struct MasPathSet *paths,
                                      double *xy,
                                      size_t n,
                                      double region_size,
                                      double min_distance,
                                      const struct MasGradientConfig *cfg,
                                      double *objective_out,
                                      uint32_t *iterations_out);

/**
 * Closed-form secrecy rate for interleaved complex channels of length `n`.
 * Returns `MasStatus::Infeasible` when the SNR target exceeds the budget.
 *
 * # Safety
 * `h_b` and `h_e` must hold `2 n` doubles; `out` must be valid.
 */
enum MasStatus mas_secrecy_rate_closed_form(const double *h_b,
                                            const double *h_e,
                                            size_t n,
                                            double target_snr,
                                            double total_power,
                                            double noise_power_b,
                                            double noise_power_e,
                                            double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MA_SECRECY_H */
