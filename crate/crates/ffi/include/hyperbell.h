#ifndef HYPERBELL_H
#define HYPERBELL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define HB_DOF_POLARIZATION 0

#define HB_DOF_PATH 1

#define HB_OBS_A 0

#define HB_OBS_LOWER_A 1

#define HB_OBS_B 2

#define HB_OBS_LOWER_B 3

#define HB_NOISE_NONE 0

#define HB_NOISE_WHITE 1

#define HB_NOISE_DEPHASING 2

#define HB_CLASS_FACTORIZABLE 0

#define HB_CLASS_CONTEXT_UNRESTRICTED 1

typedef enum HbStatus {
  HB_STATUS_OK = 0,
  HB_STATUS_NULL_POINTER = 1,
  HB_STATUS_INVALID_ARGUMENT = 2,
  HB_STATUS_NUMERICAL = 3,
  HB_STATUS_GUARD_EXCEEDED = 4,
  HB_STATUS_DIMENSION_MISMATCH = 5,
  HB_STATUS_BUFFER_TOO_SMALL = 6,
  HB_STATUS_PANIC = 7,
} HbStatus;

/**
 * A Bell operator with its term table.
 */
typedef struct HbBellOperator HbBellOperator;

/**
 * A pure or mixed state.
 */
typedef struct HbState HbState;

/**
 * Result of an exhaustive local-hidden-variable search.
 */
typedef struct HbBound {
  int64_t bound;
  uint64_t witness_u;
  uint64_t witness_d;
  uint64_t strategies_evaluated;
} HbBound;

/**
 * One local observable: `name` is an `HB_OBS_*` value, `kind` an
 * `HB_DOF_*` value.
 */
typedef struct HbObservable {
  uint32_t name;
  uint32_t kind;
} HbObservable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *hb_version(void);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *hb_last_error_message(void);

/**
 * `(|HH⟩ + e^{iθ}|VV⟩)/√2 ⊗ (|lr⟩ + e^{iφ}|rl⟩)/√2`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum HbStatus hb_state_hyper(double theta, double phi, struct HbState **out);

/**
 * Ideal N-DOF state, one maximally entangled pair per DOF.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum HbStatus hb_state_ideal(uintptr_t n_dof, struct HbState **out);

/**
 * New state with `noise` (an `HB_NOISE_*` value) applied; `state` is
 * left unchanged.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum HbStatus hb_state_apply_noise(const struct HbState *state,
                                   uint32_t noise,
                                   double v_pi,
                                   double v_k,
                                   struct HbState **out);

/**
 * Hilbert-space dimension and DOF count of a state.
 *
 * # Safety
 * `state` must be a live handle; the out pointers must be writable.
 */
enum HbStatus hb_state_shape(const struct HbState *state, uintptr_t *out_dim, uintptr_t *out_n_dof);

/**
 * # Safety
 * `state` must be null or a handle not yet freed.
 */
void hb_state_free(struct HbState *state);

/**
 * Product Bell operator over `n_dof` DOFs (polarization, path, ...).
 *
 * # Safety
 * `out` must be writable.
 */
enum HbStatus hb_bell_build(uintptr_t n_dof, struct HbBellOperator **out);

/**
 * # Safety
 * `bell` must be null or a handle not yet freed.
 */
void hb_bell_free(struct HbBellOperator *bell);

/**
 * Signed `⟨β⟩` on a state with the same DOF layout.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum HbStatus hb_bell_quantum_value(const struct HbBellOperator *bell,
                                    const struct HbState *state,
                                    double *out);

/**
 * # Safety
 * `bell` must be live; `out` must be writable.
 */
enum HbStatus hb_bell_spectral_radius(const struct HbBellOperator *bell, double *out);

/**
 * Exhaustive maximum over one strategy class (`HB_CLASS_*`). Refuses with
 * `HB_STATUS_GUARD_EXCEEDED` when the class has more than `guard`
 * strategy pairs; `guard = 0` selects the default of 2^32.
 *
 * # Safety
 * `bell` must be live; `out` must be writable.
 */
enum HbStatus hb_lhv_max_bound(const struct HbBellOperator *bell,
                               uint32_t class_,
                               uint64_t guard,
                               struct HbBound *out);

/**
 * Born probabilities of the `4^n_dof` joint outcomes. Outcome index is
 * `o_u·2^n_dof + o_d`; DOF `j` reads bit `n_dof−1−j` of each local index,
 * 0 meaning +1. `out_len` always receives the required length.
 *
 * # Safety
 * `u` and `d` must point to `n_dof` observables each; `probs` must hold
 * `capacity` doubles.
 */
enum HbStatus hb_born_distribution(const struct HbState *state,
                                   const struct HbObservable *u,
                                   const struct HbObservable *d,
                                   uintptr_t n_dof,
                                   double *probs,
                                   uintptr_t capacity,
                                   uintptr_t *out_len);

/**
 * Seeded multinomial sample of `n_events` outcomes, indexed as in
 * `hb_born_distribution`.
 *
 * # Safety
 * As for `hb_born_distribution`, with `counts` holding `capacity` values.
 */
enum HbStatus hb_sample(const struct HbState *state,
                        const struct HbObservable *u,
                        const struct HbObservable *d,
                        uintptr_t n_dof,
                        uint64_t n_events,
                        uint64_t seed,
                        uint64_t *counts,
                        uintptr_t capacity,
                        uintptr_t *out_len);

/**
 * `(|β| − bound)/σ_β`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HbStatus hb_violation_sigmas(double beta, double std_err, double bound, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERBELL_H */
