#ifndef KGDIV_H
#define KGDIV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KgdivActorType {
  KGDIV_ACTOR_TYPE_PERSON = 0,
  KGDIV_ACTOR_TYPE_ORGANISATION = 1,
  KGDIV_ACTOR_TYPE_GEOPOLITICAL_ENTITY = 2,
} KgdivActorType;

typedef enum KgdivStatus {
  KGDIV_STATUS_OK = 0,
  KGDIV_STATUS_NULL_POINTER = 1,
  KGDIV_STATUS_INVALID_UTF8 = 2,
  KGDIV_STATUS_INVALID_ARGUMENT = 3,
  KGDIV_STATUS_NOT_FOUND = 4,
  KGDIV_STATUS_IO = 5,
  KGDIV_STATUS_INTERNAL = 6,
} KgdivStatus;

typedef enum KgdivVerdict {
  KGDIV_VERDICT_OVER = 0,
  KGDIV_VERDICT_UNDER = 1,
  KGDIV_VERDICT_INDETERMINATE = 2,
} KgdivVerdict;

/**
 * A finished audit run.
 */
typedef struct KgdivAudit KgdivAudit;

/**
 * Entities with mention counts and features, scored with Jaccard disparity.
 */
typedef struct KgdivEntitySet KgdivEntitySet;

/**
 * Visibility bounds and verdict of one party at one audit date.
 */
typedef struct KgdivAuditCell {
  size_t lower_count;
  size_t upper_count;
  size_t active_total;
  double lower_share;
  double upper_share;
  double baseline_share;
  /**
   * A `KgdivVerdict` value.
   */
  int32_t verdict;
} KgdivAuditCell;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, static storage.
 */
const char *kgdiv_version(void);

/**
 * Error message of the most recent call on this thread, or NULL if it
 * succeeded. Valid until the next library call on the same thread.
 */
const char *kgdiv_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void kgdiv_string_free(char *s);

/**
 * Δ for `n` shares (summing to 1) and a row-major `n × n` disparity matrix.
 *
 * # Safety
 * `shares` must hold `n` values and `disparity` `n * n`; `out` must be writable.
 */
enum KgdivStatus kgdiv_stirling_delta(const double *shares,
                                      const double *disparity,
                                      size_t n,
                                      double alpha,
                                      double beta,
                                      double *out);

/**
 * `1 − Σ p²` over `n` shares.
 *
 * # Safety
 * `shares` must hold `n` values; `out` must be writable.
 */
enum KgdivStatus kgdiv_gini_simpson(const double *shares, size_t n, double *out);

/**
 * Verdict for a pair of visibility shares against a baseline share.
 *
 * # Safety
 * `out` must be writable.
 */
enum KgdivStatus kgdiv_classify(double lower_share,
                                double upper_share,
                                double baseline_share,
                                enum KgdivVerdict *out);

struct KgdivEntitySet *kgdiv_entity_set_new(void);

/**
 * # Safety
 * `set` must come from `kgdiv_entity_set_new` and not have been freed.
 */
void kgdiv_entity_set_free(struct KgdivEntitySet *set);

/**
 * Adds `count` mentions of entity `id`. Repeated calls accumulate; the
 * actor type of the first call sticks.
 *
 * # Safety
 * `set` must be a live handle and `id` a NUL-terminated string.
 */
enum KgdivStatus kgdiv_entity_set_add(struct KgdivEntitySet *set,
                                      const char *id,
                                      enum KgdivActorType actor_type,
                                      uint64_t count);

/**
 * Attaches a feature to an entity already added.
 *
 * # Safety
 * `set` must be a live handle; strings NUL-terminated.
 */
enum KgdivStatus kgdiv_entity_set_add_feature(struct KgdivEntitySet *set,
                                              const char *id,
                                              const char *name,
                                              const char *value);

/**
 * Δ of the set under Jaccard disparity.
 *
 * # Safety
 * `set` must be a live handle; `out` writable.
 */
enum KgdivStatus kgdiv_entity_set_delta(const struct KgdivEntitySet *set,
                                        double alpha,
                                        double beta,
                                        double *out);

/**
 * Runs an audit over one snapshot directory.
 *
 * `parties` may be NULL (party_info.csv next to `aliases`), `body` NULL for
 * KVV and `schedule` NULL for the default schedule. Careers without an end
 * run to each source's retrieval date.
 *
 * # Safety
 * Strings must be NUL-terminated; `out` writable.
 */
enum KgdivStatus kgdiv_audit_run(const char *snapshot_dir,
                                 const char *aliases,
                                 const char *parties,
                                 const char *baseline,
                                 const char *body,
                                 const char *schedule,
                                 struct KgdivAudit **out);

/**
 * # Safety
 * `audit` must come from `kgdiv_audit_run` and not have been freed.
 */
void kgdiv_audit_free(struct KgdivAudit *audit);

/**
 * Number of (source, date, party) rows.
 *
 * # Safety
 * `audit` must be a live handle or NULL (0).
 */
size_t kgdiv_audit_row_count(const struct KgdivAudit *audit);

/**
 * Looks up one cell by source, party and date (YYYY-MM-DD).
 *
 * # Safety
 * `audit` must be a live handle; strings NUL-terminated; `out` writable.
 */
enum KgdivStatus kgdiv_audit_cell(const struct KgdivAudit *audit,
                                  const char *source,
                                  const char *party,
                                  const char *time_point,
                                  struct KgdivAuditCell *out);

/**
 * The audit as CSV text; free with `kgdiv_string_free`.
 *
 * # Safety
 * `audit` must be a live handle; `out` writable.
 */
enum KgdivStatus kgdiv_audit_csv(const struct KgdivAudit *audit, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KGDIV_H */
