#ifndef HARMAP_H
#define HARMAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HarmapStatus {
  HARMAP_STATUS_OK = 0,
  HARMAP_STATUS_NULL_POINTER = 1,
  HARMAP_STATUS_INVALID_UTF8 = 2,
  HARMAP_STATUS_SYNTAX = 3,
  HARMAP_STATUS_DOMAIN = 4,
  HARMAP_STATUS_NOT_POLYNOMIAL = 5,
  HARMAP_STATUS_NOT_TRANSCENDENTAL = 6,
  HARMAP_STATUS_PRECONDITION = 7,
  HARMAP_STATUS_GRID_MISMATCH = 8,
  HARMAP_STATUS_CONFIG = 9,
  HARMAP_STATUS_IO = 10,
  HARMAP_STATUS_BUFFER_TOO_SMALL = 11,
  HARMAP_STATUS_PANIC = 12,
} HarmapStatus;

typedef enum HarmapMembership {
  HARMAP_MEMBERSHIP_FATOU_LIKE = 0,
  HARMAP_MEMBERSHIP_JULIA_LIKE = 1,
  HARMAP_MEMBERSHIP_UNDETERMINED = 2,
} HarmapMembership;

typedef enum HarmapMode {
  HARMAP_MODE_NONE = 0,
  HARMAP_MODE_CONVERGENT_FAMILY = 1,
  HARMAP_MODE_COMPACT_DIVERGENCE = 2,
} HarmapMode;

typedef enum HarmapOrbitClass {
  HARMAP_ORBIT_CLASS_ESCAPING = 0,
  HARMAP_ORBIT_CLASS_ORBITALLY_BOUNDED = 1,
  HARMAP_ORBIT_CLASS_OSCILLATING = 2,
  HARMAP_ORBIT_CLASS_UNDETERMINED = 3,
} HarmapOrbitClass;

/**
 * Opaque orbit budget.
 */
typedef struct HarmapBudget HarmapBudget;

/**
 * Opaque harmonic map `h + conj(g)`.
 */
typedef struct HarmapMap HarmapMap;

typedef struct HarmapComplex {
  double re;
  double im;
} HarmapComplex;

/**
 * Result of an evaluation. When `overflow` is set, `re` and `im` are 0 and
 * `log_abs` carries `log|w|`; otherwise `log_abs` is `log|re + i im|`.
 */
typedef struct HarmapValue {
  bool overflow;
  double re;
  double im;
  double log_abs;
} HarmapValue;

/**
 * Pointwise verdict. Indices are -1 when absent.
 */
typedef struct HarmapVerdict {
  enum HarmapMembership membership;
  enum HarmapMode mode;
  enum HarmapOrbitClass orbit_class;
  int64_t exit_index;
  int64_t settle_index;
} HarmapVerdict;

/**
 * Window and resolution; pixel (i, j) is column i, row j, row 0 on top.
 */
typedef struct HarmapGridSpec {
  double re_min;
  double re_max;
  double im_min;
  double im_max;
  uint32_t width;
  uint32_t height;
} HarmapGridSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *harmap_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *harmap_version(void);

/**
 * Parses `h` and `g` and stores a new map in `*out`.
 *
 * # Safety
 * `h` and `g` must be NUL-terminated strings; `out` must be writable.
 */
enum HarmapStatus harmap_map_new(const char *h, const char *g, struct HarmapMap **out);

/**
 * Stores the named preset map in `*out`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum HarmapStatus harmap_map_from_preset(const char *name, struct HarmapMap **out);

/**
 * # Safety
 * `map` must come from this API and not be freed twice. NULL is ignored.
 */
void harmap_map_free(struct HarmapMap *map);

/**
 * `f(z) = h(z) + conj(g(z))`.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum HarmapStatus harmap_map_eval(const struct HarmapMap *map,
                                  struct HarmapComplex z,
                                  struct HarmapValue *out);

/**
 * New budget with default limits. Free with [`harmap_budget_free`].
 */
struct HarmapBudget *harmap_budget_new(void);

/**
 * # Safety
 * `budget` must come from this API and not be freed twice. NULL is ignored.
 */
void harmap_budget_free(struct HarmapBudget *budget);

/**
 * Sets the iteration count and radii. The budget is left unchanged when
 * the new values are invalid.
 *
 * # Safety
 * `budget` must be a live handle.
 */
enum HarmapStatus harmap_budget_set_limits(struct HarmapBudget *budget,
                                           uint32_t max_iter,
                                           double escape_radius,
                                           double bounded_radius);

/**
 * Sets the neighbour sampling: `count` ladder radii from `ladder` (strictly
 * decreasing), points per circle and the separation threshold.
 *
 * # Safety
 * `budget` must be a live handle; `ladder` must point to `count` doubles.
 */
enum HarmapStatus harmap_budget_set_sampling(struct HarmapBudget *budget,
                                             const double *ladder,
                                             size_t count,
                                             uint32_t sample_count,
                                             double separation_epsilon);

/**
 * Classifies one point. A NULL `budget` means the default budget.
 *
 * # Safety
 * `map` must be a live handle, `budget` live or NULL, `out` writable.
 */
enum HarmapStatus harmap_classify_point(const struct HarmapMap *map,
                                        const struct HarmapBudget *budget,
                                        struct HarmapComplex z,
                                        struct HarmapVerdict *out);

/**
 * Classifies every pixel into `out` (row-major, `width * height` entries).
 * `threads = 0` uses all cores; the result never depends on it.
 *
 * # Safety
 * `map` live, `budget` live or NULL, `spec` readable, `out` writable for
 * `len` entries.
 */
enum HarmapStatus harmap_classify_grid(const struct HarmapMap *map,
                                       const struct HarmapBudget *budget,
                                       const struct HarmapGridSpec *spec,
                                       uint32_t threads,
                                       struct HarmapVerdict *out,
                                       size_t len);

/**
 * Renders the P6 image into `buf`. `*written` receives the image size,
 * also when the buffer is too small, so a NULL `buf` with `len = 0` queries
 * the size (at the cost of a full classification).
 *
 * # Safety
 * `map` live, `budget` live or NULL, `spec` readable, `buf` writable for
 * `len` bytes (or NULL with `len = 0`), `written` writable.
 */
enum HarmapStatus harmap_render_ppm(const struct HarmapMap *map,
                                    const struct HarmapBudget *budget,
                                    const struct HarmapGridSpec *spec,
                                    uint32_t threads,
                                    uint8_t *buf,
                                    size_t len,
                                    size_t *written);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARMAP_H */
