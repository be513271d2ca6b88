#ifndef PURITY_H
#define PURITY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum PurityStatus {
  PURITY_STATUS_OK = 0,
  PURITY_STATUS_NULL_POINTER = 1,
  PURITY_STATUS_INVALID_ARGUMENT = 2,
  PURITY_STATUS_PARSE_ERROR = 3,
  /**
   * The computation was refused because it would be too large.
   */
  PURITY_STATUS_GUARD = 4,
  PURITY_STATUS_BUFFER_TOO_SMALL = 5,
  PURITY_STATUS_PANIC = 6,
} PurityStatus;

/**
 * Opaque tradeoff curve (points plus envelope).
 */
typedef struct PurityCurve PurityCurve;

/**
 * Opaque classical-quantum ensemble.
 */
typedef struct PurityEnsemble PurityEnsemble;

/**
 * Optimizer settings; start from [`purity_options_default`].
 */
typedef struct PurityOptions {
  /**
   * Output alphabet size; 0 means |X| + 2.
   */
  size_t y_size;
  size_t restarts;
  uint64_t master_seed;
  size_t max_iterations;
  double convergence_tol;
  /**
   * 0 projected gradient, 1 alternating maximization, 2 both.
   */
  uint32_t method;
  size_t refinements;
} PurityOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated, truncated to
 * `cap`). Returns the full message length in bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable bytes.
 */
size_t purity_last_error(char *buf, size_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *purity_version(void);

struct PurityOptions purity_options_default(void);

/**
 * Parses an ensemble in the text format (`|X| d` header, then one line per label).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be writable.
 */
enum PurityStatus purity_ensemble_parse(const char *text, struct PurityEnsemble **out);

/**
 * Builds an ensemble from `labels` probabilities and `labels` density matrices of size
 * `dim × dim`, given as interleaved (re, im) pairs in row-major order
 * (`labels · dim² · 2` doubles).
 *
 * # Safety
 * Pointers must reference arrays of the stated lengths; `out` must be writable.
 */
enum PurityStatus purity_ensemble_new(size_t labels,
                                      size_t dim,
                                      const double *probs,
                                      const double *states,
                                      struct PurityEnsemble **out);

/**
 * The four-state BB84 ensemble with angle `theta` ∈ [0, π/2].
 *
 * # Safety
 * `out` must be writable.
 */
enum PurityStatus purity_ensemble_bb84(double theta, struct PurityEnsemble **out);

/**
 * Uniform ensemble over `nodes` symmetric points of the Bloch sphere.
 *
 * # Safety
 * `out` must be writable.
 */
enum PurityStatus purity_ensemble_sphere(size_t nodes, struct PurityEnsemble **out);

/**
 * # Safety
 * `ens` must be null or a handle from this library that has not been freed.
 */
void purity_ensemble_free(struct PurityEnsemble *ens);

/**
 * Number of labels, or 0 for a null handle.
 *
 * # Safety
 * `ens` must be null or a live handle.
 */
size_t purity_ensemble_labels(const struct PurityEnsemble *ens);

/**
 * Quantum dimension, or 0 for a null handle.
 *
 * # Safety
 * `ens` must be null or a live handle.
 */
size_t purity_ensemble_dim(const struct PurityEnsemble *ens);

/**
 * Holevo information of the ensemble, bits.
 *
 * # Safety
 * `ens` must be a live handle; `out` must be writable.
 */
enum PurityStatus purity_ensemble_holevo(const struct PurityEnsemble *ens, double *out);

/**
 * κ(ρ^X) + κ(ρ^B), bits.
 *
 * # Safety
 * `ens` must be a live handle; `out` must be writable.
 */
enum PurityStatus purity_ensemble_local_purity(const struct PurityEnsemble *ens, double *out);

/**
 * `I(Y;B) − μ I(Y;X)` for the row-major `|X| × outputs` channel `w`.
 *
 * # Safety
 * `w` must hold `labels · outputs` doubles; `out` must be writable.
 */
enum PurityStatus purity_lagrangian_objective(const struct PurityEnsemble *ens,
                                              const double *w,
                                              size_t outputs,
                                              double mu,
                                              double *out);

/**
 * `I(Y;BE)` of the purified state and `I(Y;X)` for channel `w`.
 *
 * # Safety
 * `w` must hold `labels · outputs` doubles; both outputs must be writable.
 */
enum PurityStatus purity_cross_check(const struct PurityEnsemble *ens,
                                     const double *w,
                                     size_t outputs,
                                     double *i_ybe,
                                     double *i_yx);

/**
 * Computes a P curve (`kind == 0`, multipliers in [0, 1]) or a D curve (`kind == 1`).
 * A null `opts` uses the defaults.
 *
 * # Safety
 * `mus` must hold `count` doubles; `opts` must be null or valid; `out` must be writable.
 */
enum PurityStatus purity_curve_compute(const struct PurityEnsemble *ens,
                                       uint32_t kind,
                                       const double *mus,
                                       size_t count,
                                       const struct PurityOptions *opts,
                                       struct PurityCurve **out);

/**
 * # Safety
 * `curve` must be null or a handle from this library that has not been freed.
 */
void purity_curve_free(struct PurityCurve *curve);

/**
 * Number of optimized points, or 0 for a null handle.
 *
 * # Safety
 * `curve` must be null or a live handle.
 */
size_t purity_curve_len(const struct PurityCurve *curve);

/**
 * Point `index` (sorted by rate): multiplier, rate and value.
 *
 * # Safety
 * `curve` must be a live handle; outputs must be writable.
 */
enum PurityStatus purity_curve_point(const struct PurityCurve *curve,
                                     size_t index,
                                     double *mu,
                                     double *rate,
                                     double *value);

/**
 * Envelope value at `rate`.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be writable.
 */
enum PurityStatus purity_curve_eval(const struct PurityCurve *curve, double rate, double *out);

/**
 * Writes the points CSV into `buf` (NUL-terminated) and its length into `len`. If `cap` is
 * too small nothing is written except `len`, and `BufferTooSmall` is returned.
 *
 * # Safety
 * `buf` must be null or hold `cap` bytes; `len` must be writable.
 */
enum PurityStatus purity_curve_csv(const struct PurityCurve *curve,
                                   char *buf,
                                   size_t cap,
                                   size_t *len);

/**
 * κ(ρ^X) + κ(ρ^B) + P(rate) with P read from a P curve of the same ensemble.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum PurityStatus purity_kappa_arrow(const struct PurityEnsemble *ens,
                                     const struct PurityCurve *curve,
                                     double rate,
                                     double *out);

/**
 * Best `I(Y;B)` over grid channels with `I(Y;X) ≤ rate`.
 *
 * # Safety
 * `ens` must be a live handle; `out` must be writable.
 */
enum PurityStatus purity_oracle(const struct PurityEnsemble *ens,
                                double rate,
                                size_t outputs,
                                double grid_step,
                                double *out);

/**
 * Exact probability that `n` i.i.d. draws from `p` are `delta`-typical.
 *
 * # Safety
 * `p` must hold `k` doubles; `out` must be writable.
 */
enum PurityStatus purity_typical_probability(const double *p,
                                             size_t k,
                                             size_t n,
                                             double delta,
                                             double *out);

/**
 * Typical-subspace rate and mass of a `dim × dim` state given as (re, im) pairs.
 *
 * # Safety
 * `state` must hold `2 · dim²` doubles; outputs must be writable.
 */
enum PurityStatus purity_typical_subspace(const double *state,
                                          size_t dim,
                                          size_t n,
                                          double delta,
                                          double *rate,
                                          double *mass);

/**
 * Point `(R, P)` of the uniform-ensemble closed form at parameter `lambda > 0`.
 *
 * # Safety
 * Outputs must be writable.
 */
enum PurityStatus purity_uniform_curve_point(double lambda, double *rate, double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PURITY_H */
