#ifndef MAXWELLQM_H
#define MAXWELLQM_H

/* Generated by cbindgen; do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum MqStatus {
  MQ_STATUS_OK = 0,
  MQ_STATUS_NULL_POINTER = 1,
  MQ_STATUS_INVALID_ARGUMENT = 2,
  MQ_STATUS_INVALID_GRID = 3,
  MQ_STATUS_OFF_LATTICE = 4,
  MQ_STATUS_ZERO_FREQUENCY = 5,
  MQ_STATUS_BOUNDARY_SUPPORT = 6,
  MQ_STATUS_NON_NORMALIZABLE = 7,
  MQ_STATUS_CONVENTION_MISMATCH = 8,
  MQ_STATUS_GRID_MISMATCH = 9,
  MQ_STATUS_NUMERICAL = 10,
  MQ_STATUS_PANIC = 11,
} MqStatus;

/**
 * Polarization mode codes.
 */
typedef enum MqMode {
  MQ_MODE_SCALAR = 0,
  MQ_MODE_PLUS = 1,
  MQ_MODE_MINUS = 2,
  MQ_MODE_LONGITUDINAL = 3,
} MqMode;

/**
 * Opaque momentum lattice.
 */
typedef struct MqGrid MqGrid;

/**
 * Opaque photon state.
 */
typedef struct MqState MqState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next failing call.
 */
const char *mq_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mq_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to write the new handle to.
 */
enum MqStatus mq_grid_new(uintptr_t n,
                          double k_max,
                          bool offset,
                          double c,
                          double hbar,
                          double eps0,
                          struct MqGrid **out);

/**
 * # Safety
 * `grid` must come from `mq_grid_new` and not be used afterwards; null is ignored.
 */
void mq_grid_free(struct MqGrid *grid);

/**
 * Number of nodes `n^3`; 0 for a null handle.
 *
 * # Safety
 * `grid` must be a live handle or null.
 */
uintptr_t mq_grid_len(const struct MqGrid *grid);

/**
 * Position spacing `2 pi / (n dk)`; NaN for a null handle.
 *
 * # Safety
 * `grid` must be a live handle or null.
 */
double mq_grid_dx(const struct MqGrid *grid);

/**
 * Gaussian packet normalized under the product of its convention
 * (`newton_wigner = false`: invariant). `mode` is an `MqMode` code, `sign` is +1 or -1.
 *
 * # Safety
 * `grid` must be live, `k0` must point to 3 doubles, `out` must be writable.
 */
enum MqStatus mq_state_gaussian(const struct MqGrid *grid,
                                const double *k0,
                                double s,
                                int32_t mode,
                                int32_t sign,
                                int32_t m,
                                bool newton_wigner,
                                struct MqState **out);

/**
 * # Safety
 * `state` must come from this library and not be used afterwards; null is ignored.
 */
void mq_state_free(struct MqState *state);

/**
 * `a + b` as a new state.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum MqStatus mq_state_add(const struct MqState *a, const struct MqState *b, struct MqState **out);

/**
 * `U(tau)` applied to `state`, as a new state.
 *
 * # Safety
 * `state` must be live and `out` writable.
 */
enum MqStatus mq_state_evolve(const struct MqState *state, double tau, struct MqState **out);

/**
 * Inner product under the convention shared by both states.
 *
 * # Safety
 * `a`, `b` must be live; `re`, `im` writable.
 */
enum MqStatus mq_inner_product(const struct MqState *a,
                               const struct MqState *b,
                               double *re,
                               double *im);

/**
 * `<x>` of a normalizable state.
 *
 * # Safety
 * `state` must be live; `out` must point to 3 writable doubles.
 */
enum MqStatus mq_position_expectation(const struct MqState *state, double *out);

/**
 * Real wave function `Re sum_lambda psi_lambda^+` at time `t` on the dual lattice.
 *
 * # Safety
 * `state` must be live; `out` must hold `len` doubles and `len` must equal the node count.
 */
enum MqStatus mq_state_real_psi(const struct MqState *state, double t, double *out, uintptr_t len);

/**
 * Positive-frequency correlator `I+(t, r)` with a sharp band limit `k`.
 *
 * # Safety
 * `radii`, `re`, `im` must each hold `count` doubles.
 */
enum MqStatus mq_hegerfeldt(double t,
                            const double *radii,
                            uintptr_t count,
                            double k,
                            double c,
                            double *re,
                            double *im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAXWELLQM_H */
