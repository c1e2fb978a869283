#ifndef QCORR_H
#define QCORR_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  QC_STATUS_ARGUMENT = 2,
  QC_STATUS_SIZE = 3,
  QC_STATUS_SHAPE = 4,
  QC_STATUS_INDEX = 5,
  QC_STATUS_PARTITION = 6,
  QC_STATUS_VALIDATION = 7,
  QC_STATUS_PRECONDITION = 8,
  QC_STATUS_PARSE = 9,
  QC_STATUS_SCHEMA = 10,
  QC_STATUS_IO = 11,
  QC_STATUS_PANIC = 12,
} QcStatus;

typedef enum QcRegion {
  QC_REGION_CLASSICAL = 0,
  QC_REGION_QUANTUM = 1,
  QC_REGION_UNATTAINABLE = 2,
} QcRegion;

/**
 * Opaque density operator.
 */
typedef struct QcDensity QcDensity;

/**
 * Opaque pure state.
 */
typedef struct QcState QcState;

/**
 * Internal/external split of the total correlation, in nats.
 */
typedef struct QcDecomposition {
  double internal_alpha;
  double internal_beta;
  double external;
  double total;
} QcDecomposition;

typedef struct QcBounds {
  double classical_upper;
  double quantum_upper;
  double gap_bound;
} QcBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qc_last_error_message(void);

/**
 * NUL-terminated crate version. Static; do not free.
 */
const char *qc_version(void);

/**
 * Releases a string returned by this library.
 */
void qc_string_free(char *s);

enum QcStatus qc_state_ghz(size_t n_qubits, struct QcState **out);

/**
 * Uniform superposition over `n_per_side` Bell pairs straddling the middle cut.
 */
enum QcStatus qc_state_uniform_entangled(size_t n_per_side, struct QcState **out);

enum QcStatus qc_state_bell_product(size_t pairs, struct QcState **out);

enum QcStatus qc_state_ghz_block_product(size_t n_per_block, struct QcState **out);

/**
 * Builds a state from `len` amplitudes. `im` may be NULL for real input.
 */
enum QcStatus qc_state_from_amplitudes(size_t n_qubits,
                                       const double *re,
                                       const double *im,
                                       size_t len,
                                       struct QcState **out);

/**
 * Builds a state from a spec string such as `ghz:4` or `file:state.json`.
 */
enum QcStatus qc_state_from_spec(const char *spec, struct QcState **out);

enum QcStatus qc_state_load(const char *path, struct QcState **out);

enum QcStatus qc_state_save(const struct QcState *s, const char *path);

/**
 * Qubit count of `s`, or 0 for NULL.
 */
size_t qc_state_n_qubits(const struct QcState *s);

/**
 * Copies the `2^n` amplitudes into `re` and `im`, each of length `len`.
 */
enum QcStatus qc_state_amplitudes(const struct QcState *s, double *re, double *im, size_t len);

/**
 * Moves qubit `i` to position `perm[i]`.
 */
enum QcStatus qc_state_permute(const struct QcState *s,
                               const size_t *perm,
                               size_t len,
                               struct QcState **out);

void qc_state_free(struct QcState *s);

enum QcStatus qc_density_from_state(const struct QcState *s, struct QcDensity **out);

/**
 * Validates a row-major `2^n x 2^n` matrix. `im` may be NULL.
 */
enum QcStatus qc_density_from_matrix(size_t n_qubits,
                                     const double *re,
                                     const double *im,
                                     size_t len,
                                     struct QcDensity **out);

/**
 * Reduced operator on `keep`, in ascending qubit order.
 */
enum QcStatus qc_density_reduce(const struct QcDensity *d,
                                const size_t *keep,
                                size_t len,
                                struct QcDensity **out);

size_t qc_density_n_qubits(const struct QcDensity *d);

void qc_density_free(struct QcDensity *d);

enum QcStatus qc_entropy(const struct QcDensity *d, double *out);

enum QcStatus qc_subset_entropy(const struct QcDensity *d,
                                const size_t *subset,
                                size_t len,
                                double *out);

enum QcStatus qc_total_correlation(const struct QcDensity *d, double *out);

/**
 * Index of correlation across the cut `alpha | rest`.
 */
enum QcStatus qc_index_of_correlation(const struct QcDensity *d,
                                      const size_t *alpha,
                                      size_t alpha_len,
                                      double *out);

enum QcStatus qc_decompose(const struct QcDensity *d,
                           const size_t *alpha,
                           size_t alpha_len,
                           struct QcDecomposition *out);

enum QcStatus qc_is_product_across(const struct QcDensity *d,
                                   const size_t *alpha,
                                   size_t alpha_len,
                                   double tol,
                                   bool *out);

enum QcStatus qc_classify_region(double value,
                                 const double *max_entropies,
                                 size_t len,
                                 enum QcRegion *out);

enum QcStatus qc_correlation_bounds(const double *entropies, size_t len, struct QcBounds *out);

enum QcStatus qc_min_purifying_qubits(const struct QcDensity *d, size_t *out);

/**
 * Spectral purification with the ancilla register appended after the system
 * qubits. `ancilla_out` and `residual_out` may be NULL.
 */
enum QcStatus qc_purify(const struct QcDensity *d,
                        struct QcState **out,
                        size_t *ancilla_out,
                        double *residual_out);

/**
 * JSON sweep over every bipartition of the state named by `spec`. Pass a
 * negative `side_size` for all cuts. Free the result with [`qc_string_free`].
 */
enum QcStatus qc_sweep_json(const char *spec, int64_t side_size, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCORR_H */
