#ifndef AOSPR_H
#define AOSPR_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AosprStatus {
  AOSPR_STATUS_OK = 0,
  AOSPR_STATUS_NULL_POINTER = 1,
  AOSPR_STATUS_INVALID_ARGUMENT = 2,
  AOSPR_STATUS_CONFIG_ERROR = 3,
  AOSPR_STATUS_RUNTIME_ERROR = 4,
  AOSPR_STATUS_BUFFER_TOO_SMALL = 5,
  AOSPR_STATUS_PANIC = 6,
} AosprStatus;

/**
 * Opaque policy handle.
 */
typedef struct AosprPolicy AosprPolicy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *aospr_last_error_message(void);

/**
 * Creates policy `policy_index` of an experiment config (JSON text).
 * `seed` plays the role of the repetition seed.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AosprStatus aospr_policy_new(const char *config_json,
                                  size_t policy_index,
                                  uint64_t seed,
                                  struct AosprPolicy **out);

/**
 * Number of edges `n` of the policy's graph.
 *
 * # Safety
 * `policy` must come from [`aospr_policy_new`].
 */
enum AosprStatus aospr_policy_edge_count(const struct AosprPolicy *policy, size_t *out);

/**
 * Chooses this round's path and writes its edge ids (0-based, in path
 * order) to `path`. `len` receives the path length, also when the buffer is
 * too small. Must be followed by [`aospr_policy_feedback`].
 *
 * # Safety
 * `policy` must be live; `path` must hold `cap` entries.
 */
enum AosprStatus aospr_policy_select(struct AosprPolicy *policy,
                                     uint32_t *path,
                                     size_t cap,
                                     size_t *len);

/**
 * Edges whose losses the pending decision wants reported (the chosen path
 * plus any probed paths), sorted.
 *
 * # Safety
 * As for [`aospr_policy_select`].
 */
enum AosprStatus aospr_policy_observed(const struct AosprPolicy *policy,
                                       uint32_t *edges,
                                       size_t cap,
                                       size_t *len);

/**
 * Reports this round's losses, one per edge (`n` values in `[0, 1]`);
 * only the observed edges are read. Closes the round.
 *
 * # Safety
 * `losses` must hold `n` values.
 */
enum AosprStatus aospr_policy_feedback(struct AosprPolicy *policy, const double *losses, size_t n);

/**
 * Releases a policy. Null is ignored.
 *
 * # Safety
 * `policy` must come from [`aospr_policy_new`] and not be used afterwards.
 */
void aospr_policy_free(struct AosprPolicy *policy);

/**
 * Runs a whole experiment. When `output_dir` is non-null it overrides the
 * config's output directory. On success `summary_json` receives the
 * summary, to be freed with [`aospr_string_free`].
 *
 * # Safety
 * String arguments must be NUL-terminated; `summary_json` must be valid.
 */
enum AosprStatus aospr_run_experiment(const char *config_json,
                                      const char *output_dir,
                                      char **summary_json);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void aospr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AOSPR_H */
