#ifndef SC_TDR_H
#define SC_TDR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ScTdrEngine {
  SC_TDR_ENGINE_FLOAT = 0,
  SC_TDR_ENGINE_STOCHASTIC = 1,
  SC_TDR_ENGINE_FIXED = 2,
  SC_TDR_ENGINE_ESN = 3,
} ScTdrEngine;

typedef enum ScTdrStatus {
  SC_TDR_STATUS_OK = 0,
  SC_TDR_STATUS_NULL_POINTER = 1,
  SC_TDR_STATUS_INVALID_ARGUMENT = 2,
  SC_TDR_STATUS_CONFIG = 3,
  SC_TDR_STATUS_NUMERICAL = 4,
  SC_TDR_STATUS_IO = 5,
  SC_TDR_STATUS_PANIC = 6,
} ScTdrStatus;

/**
 * Opaque trained readout handle.
 */
typedef struct ScTdrReadout ScTdrReadout;

/**
 * Opaque reservoir handle.
 */
typedef struct ScTdrReservoir ScTdrReservoir;

/**
 * Reservoir parameters. The ESN engine reads `nodes` and `seed` only.
 */
typedef struct ScTdrParams {
  enum ScTdrEngine engine;
  size_t nodes;
  size_t stream_len;
  double alpha;
  double gamma;
  double theta;
  /**
   * Bernstein order.
   */
  size_t order;
  uint64_t seed;
  bool reseed;
  size_t copy_delay;
} ScTdrParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Defaults for an `nodes`-node float reservoir seeded with `seed`.
 */
struct ScTdrParams sc_tdr_params_default(size_t nodes, uint64_t seed);

/**
 * Build a reservoir; on success `*out` owns a new handle.
 *
 * # Safety
 * `params` must point to a valid `ScTdrParams` and `out` to writable storage
 * for one pointer.
 */
enum ScTdrStatus sc_tdr_reservoir_new(const struct ScTdrParams *params,
                                      struct ScTdrReservoir **out);

/**
 * # Safety
 * `res` must be null or a handle from [`sc_tdr_reservoir_new`] not yet freed.
 */
void sc_tdr_reservoir_free(struct ScTdrReservoir *res);

/**
 * Node count, or 0 for a null handle.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
size_t sc_tdr_reservoir_nodes(const struct ScTdrReservoir *res);

/**
 * Zero the reservoir state.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
enum ScTdrStatus sc_tdr_reservoir_reset(struct ScTdrReservoir *res);

/**
 * Feed one input sample and copy the node values into `out`, which must hold
 * exactly `nodes` doubles.
 *
 * # Safety
 * `res` must be a live handle and `out` valid for `out_len` writes.
 */
enum ScTdrStatus sc_tdr_reservoir_step(struct ScTdrReservoir *res,
                                       double u,
                                       double *out,
                                       size_t out_len);

/**
 * Drive the reservoir over `inputs` and write the rows after `washout`,
 * row-major, into `out` (`(len - washout) * nodes` doubles).
 *
 * # Safety
 * `res` must be a live handle, `inputs` valid for `len` reads and `out`
 * valid for `out_len` writes.
 */
enum ScTdrStatus sc_tdr_reservoir_run(struct ScTdrReservoir *res,
                                      const double *inputs,
                                      size_t len,
                                      size_t washout,
                                      double *out,
                                      size_t out_len);

/**
 * Ridge-regression readout on row-major `states` (`rows * cols`) with a
 * bias term.
 *
 * # Safety
 * `states` must be valid for `rows * cols` reads, `targets` for `rows`
 * reads and `out` writable for one pointer.
 */
enum ScTdrStatus sc_tdr_readout_train(const double *states,
                                      size_t rows,
                                      size_t cols,
                                      const double *targets,
                                      double ridge,
                                      struct ScTdrReadout **out);

/**
 * # Safety
 * `ro` must be null or a handle from [`sc_tdr_readout_train`] not yet freed.
 */
void sc_tdr_readout_free(struct ScTdrReadout *ro);

/**
 * Predictions for `rows` row-major feature rows written to `out`.
 *
 * # Safety
 * `ro` must be a live handle, `states` valid for `rows * cols` reads and
 * `out` valid for `rows` writes.
 */
enum ScTdrStatus sc_tdr_readout_predict(const struct ScTdrReadout *ro,
                                        const double *states,
                                        size_t rows,
                                        size_t cols,
                                        double *out);

/**
 * Copy the `cols + 1` weights (bias last) into `out`.
 *
 * # Safety
 * `ro` must be a live handle and `out` valid for `len` writes.
 */
enum ScTdrStatus sc_tdr_readout_weights(const struct ScTdrReadout *ro, double *out, size_t len);

/**
 * Normalized mean squared error of `yhat` against `y`.
 *
 * # Safety
 * `y` and `yhat` must be valid for `len` reads and `out` for one write.
 */
enum ScTdrStatus sc_tdr_nmse(const double *y, const double *yhat, size_t len, double *out);

/**
 * Message for the last failed call on this thread; empty if none. Valid
 * until the next failing call on the same thread.
 */
const char *sc_tdr_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sc_tdr_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SC_TDR_H */
