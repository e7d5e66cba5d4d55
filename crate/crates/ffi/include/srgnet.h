/* Licensed under the Apache License, Version 2.0. */

#ifndef SRGNET_H
#define SRGNET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SrgConvention {
  SRG_CONVENTION_PAPER = 0,
  SRG_CONVENTION_PHYSICAL = 1,
} SrgConvention;

typedef enum SrgFamily {
  SRG_FAMILY_COMPLETE_BIPARTITE = 0,
  SRG_FAMILY_COMPLETE_MULTIPARTITE = 1,
  SRG_FAMILY_COCKTAIL_PARTY = 2,
  SRG_FAMILY_TRIANGULAR = 3,
  SRG_FAMILY_LATTICE = 4,
  SRG_FAMILY_LATIN_SQUARE_CYCLIC = 5,
  SRG_FAMILY_KNESER62 = 6,
  SRG_FAMILY_PETERSEN = 7,
  SRG_FAMILY_SHRIKHANDE = 8,
} SrgFamily;

typedef enum SrgOutcome {
  SRG_OUTCOME_DISTINGUISHED = 0,
  SRG_OUTCOME_INDISTINGUISHABLE = 1,
  SRG_OUTCOME_PARAMETER_MISMATCH = 2,
} SrgOutcome;

typedef enum SrgPartition {
  SRG_PARTITION_ONE_VS_TWO_THREE = 0,
  SRG_PARTITION_ONE_TWO_VS_THREE = 1,
  SRG_PARTITION_ONE_THREE_VS_TWO = 2,
} SrgPartition;

/**
 * Result code of every fallible call.
 */
typedef enum SrgStatus {
  SRG_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SRG_STATUS_NULL_POINTER = 1,
  /**
   * An enum or numeric argument is out of range.
   */
  SRG_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Malformed graph6 text.
   */
  SRG_STATUS_PARSE = 3,
  /**
   * The graph is not a usable strongly regular graph.
   */
  SRG_STATUS_NOT_STRONGLY_REGULAR = 4,
  /**
   * Family generation failed or is unsupported.
   */
  SRG_STATUS_FAMILY = 5,
  /**
   * Stratification or block diagonalization failed.
   */
  SRG_STATUS_STRATIFICATION = 6,
  /**
   * Entanglement computation failed.
   */
  SRG_STATUS_ENTANGLEMENT = 7,
  /**
   * Signature computation failed.
   */
  SRG_STATUS_SIGNATURE = 8,
  /**
   * A Rust panic was caught.
   */
  SRG_STATUS_PANIC = 9,
} SrgStatus;

/**
 * Opaque graph handle.
 */
typedef struct SrgGraph SrgGraph;

/**
 * Opaque signature handle.
 */
typedef struct SrgSignature SrgSignature;

typedef struct SrgParamsC {
  size_t n;
  size_t kappa;
  size_t lambda;
  size_t mu;
} SrgParamsC;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Name of the last error on this thread (e.g. `"NotStronglyRegular"`), or
 * null if the last call succeeded. Valid until the next call on this
 * thread.
 */
const char *srgnet_last_error_name(void);

/**
 * Human-readable message of the last error on this thread, or null.
 */
const char *srgnet_last_error_message(void);

/**
 * Parses the first graph of NUL-terminated graph6 text.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` writable.
 */
enum SrgStatus srgnet_graph_from_graph6(const char *text, struct SrgGraph **out);

/**
 * Generates a family instance. `size` is `m`, `q` or `nu` as the family
 * requires (part size for complete multipartite); `parts` is only read
 * for complete multipartite.
 *
 * # Safety
 * `out` must be writable.
 */
enum SrgStatus srgnet_graph_generate(enum SrgFamily family,
                                     size_t size,
                                     size_t parts,
                                     struct SrgGraph **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `graph` must come from this library and not be used afterwards.
 */
void srgnet_graph_free(struct SrgGraph *graph);

/**
 * Number of vertices, 0 for null.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t srgnet_graph_order(const struct SrgGraph *graph);

/**
 * Strongly regular parameters of `graph`.
 *
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
enum SrgStatus srgnet_graph_params(const struct SrgGraph *graph, struct SrgParamsC *out);

/**
 * Total entanglement entropy (nats) across a strata bipartition.
 *
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
enum SrgStatus srgnet_strata_entropy(const struct SrgGraph *graph,
                                     size_t root,
                                     enum SrgPartition partition,
                                     double g,
                                     enum SrgConvention convention,
                                     double *out);

/**
 * Total entanglement entropy (nats) between `subset` and its complement.
 *
 * # Safety
 * `graph` must be a live handle, `subset` must point to `len` readable
 * indices and `out` must be writable.
 */
enum SrgStatus srgnet_subset_entropy(const struct SrgGraph *graph,
                                     const size_t *subset,
                                     size_t len,
                                     double g,
                                     enum SrgConvention convention,
                                     double *out);

/**
 * Corrected closed-form Schmidt number of the first-stratum mode.
 *
 * # Safety
 * `out` must be writable.
 */
enum SrgStatus srgnet_closed_form_schmidt(struct SrgParamsC params,
                                          double g,
                                          enum SrgPartition partition,
                                          double *out);

/**
 * Entropy (nats) of one mode with Schmidt number `d` in `[0, 1)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SrgStatus srgnet_mode_entropy(double d, double *out);

/**
 * Coupling-block signature seen from `root`.
 *
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
enum SrgStatus srgnet_a12_signature(const struct SrgGraph *graph,
                                    size_t root,
                                    struct SrgSignature **out);

/**
 * Number of distinct values, 0 for null.
 *
 * # Safety
 * `sig` must be null or a live handle.
 */
size_t srgnet_signature_len(const struct SrgSignature *sig);

/**
 * Entry `index` (descending by value).
 *
 * # Safety
 * `sig` must be a live handle; `value` and `multiplicity` writable.
 */
enum SrgStatus srgnet_signature_entry(const struct SrgSignature *sig,
                                      size_t index,
                                      double *value,
                                      size_t *multiplicity);

/**
 * Releases a signature. Null is ignored.
 *
 * # Safety
 * `sig` must come from this library and not be used afterwards.
 */
void srgnet_signature_free(struct SrgSignature *sig);

/**
 * Compares the all-root signatures of two graphs at absolute tolerance
 * `tol`.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum SrgStatus srgnet_distinguish(const struct SrgGraph *a,
                                  const struct SrgGraph *b,
                                  double tol,
                                  enum SrgOutcome *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SRGNET_H */
