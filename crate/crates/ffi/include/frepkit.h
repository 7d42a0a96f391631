/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef FREPKIT_H
#define FREPKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Repair policy: lowest-numbered replica first.
 */
#define FRK_POLICY_LOWEST_ID 0

/**
 * Repair policy: rotate replica preference per symbol.
 */
#define FRK_POLICY_SPREAD 1

/**
 * Result codes. Zero is success.
 */
typedef enum {
  FRK_STATUS_OK = 0,
  FRK_STATUS_NULL_ARGUMENT = 1,
  FRK_STATUS_INVALID_PARAMS = 2,
  FRK_STATUS_INVALID_CODE = 3,
  FRK_STATUS_PARSE = 4,
  FRK_STATUS_K_OUT_OF_RANGE = 5,
  FRK_STATUS_BUDGET_EXCEEDED = 6,
  FRK_STATUS_NOT_APPLICABLE = 7,
  FRK_STATUS_FIELD = 8,
  FRK_STATUS_DECODE = 9,
  FRK_STATUS_IRREPARABLE = 10,
  FRK_STATUS_INTEGRITY = 11,
  FRK_STATUS_DEFINITION = 12,
  FRK_STATUS_IO = 13,
  FRK_STATUS_BUFFER_TOO_SMALL = 14,
  FRK_STATUS_PANIC = 15,
} FrkStatus;

/**
 * An FR code.
 */
typedef struct FrkCode FrkCode;

/**
 * A stored system opened from a storage directory.
 */
typedef struct FrkSystem FrkSystem;

typedef struct {
  size_t n;
  size_t theta;
  size_t alpha;
  size_t rho;
} FrkParams;

/**
 * The tuple rho-(n, M, k, alpha, t) of a certified FRB code.
 */
typedef struct {
  size_t rho;
  size_t n;
  size_t m;
  size_t k;
  size_t alpha;
  size_t t;
} FrkFrb;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none.
 * Valid until the next failing call on the same thread.
 */
const char *frk_last_error(void);

/**
 * Library version as a static string.
 */
const char *frk_version(void);

/**
 * Code of the Turan graph T(n, r).
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
FrkStatus frk_code_turan(size_t n, size_t r, FrkCode **out);

/**
 * Code of the complete graph K_n.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
FrkStatus frk_code_complete(size_t n, FrkCode **out);

/**
 * Code of K_{alpha,alpha}.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
FrkStatus frk_code_bipartite(size_t alpha, FrkCode **out);

/**
 * Code of a catalog cage: "petersen", "heawood", "mcgee", "tutte-coxeter".
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be valid for writing.
 */
FrkStatus frk_code_cage(const char *name, FrkCode **out);

/**
 * Transversal-design code with `rho` groups of `alpha` points.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
FrkStatus frk_code_td(size_t rho, size_t alpha, FrkCode **out);

/**
 * Projective-plane code PG(2, q).
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
FrkStatus frk_code_plane(size_t q, FrkCode **out);

/**
 * Parses a code from its text form.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for writing.
 */
FrkStatus frk_code_from_text(const char *text, FrkCode **out);

/**
 * Reads a code file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writing.
 */
FrkStatus frk_code_load(const char *path, FrkCode **out);

/**
 * Writes a code file.
 *
 * # Safety
 * `code` must come from this library; `path` must be NUL-terminated.
 */
FrkStatus frk_code_save(const FrkCode *code, const char *path);

/**
 * Releases a code. Null is ignored.
 *
 * # Safety
 * `code` must come from this library and not be used afterwards.
 */
void frk_code_free(FrkCode *code);

/**
 * # Safety
 * `code` must come from this library; `out` must be valid for writing.
 */
FrkStatus frk_code_params(const FrkCode *code, FrkParams *out);

/**
 * Whether the code satisfies every structural invariant.
 *
 * # Safety
 * `code` must come from this library; `out` must be valid for writing.
 */
FrkStatus frk_code_is_valid(const FrkCode *code, bool *out);

/**
 * Exact file size `M(k)`. A `budget` of 0 uses the default or
 * `FREPKIT_BUDGET`.
 *
 * # Safety
 * `code` must come from this library; `out` must be valid for writing.
 */
FrkStatus frk_file_size(const FrkCode *code, size_t k, uint64_t budget_subsets, size_t *out);

/**
 * Exact batch size: the largest `t` for which every `t` symbols can be
 * read from distinct nodes.
 *
 * # Safety
 * `code` must come from this library; `out` must be valid for writing.
 */
FrkStatus frk_batch_t(const FrkCode *code, uint64_t budget_subsets, size_t *out);

/**
 * Certifies the code as an FRB code for reconstruction degree `k`.
 *
 * # Safety
 * `code` must come from this library; `out` must be valid for writing.
 */
FrkStatus frk_frb_certify(const FrkCode *code, size_t k, uint64_t budget_subsets, FrkFrb *out);

/**
 * FR-capacity bound for `1 <= k <= n`.
 *
 * # Safety
 * `out` must be valid for writing.
 */
FrkStatus frk_fr_capacity_bound(size_t n, size_t k, size_t alpha, size_t rho, int64_t *out);

/**
 * MBR capacity `k*alpha - k(k-1)/2`.
 */
int64_t frk_mbr_capacity(size_t k, size_t alpha);

/**
 * Turan-code file size closed form; requires `r | n`.
 *
 * # Safety
 * `out` must be valid for writing.
 */
FrkStatus frk_turan_file_size(size_t n, size_t r, size_t k, int64_t *out);

/**
 * Moore lower bound on the order of a `d`-regular graph of girth `g`.
 *
 * # Safety
 * `out` must be valid for writing.
 */
FrkStatus frk_moore_bound(size_t d, size_t g, uint64_t *out);

/**
 * Whether no `rho = 2` code with these parameters attains the
 * FR-capacity bound at `k`.
 */
bool frk_bound_not_tight(size_t n, size_t alpha, size_t k);

/**
 * Encodes `file` (exactly `M(k)` symbols) and writes a stored system to
 * `dir`. `field_order` 0 selects the smallest binary field that fits.
 *
 * # Safety
 * `code` must come from this library, `file` must point to `len`
 * readable values, `dir` must be NUL-terminated and `out` writable.
 */
FrkStatus frk_system_store(const FrkCode *code,
                           size_t k,
                           const uint32_t *file,
                           size_t len,
                           const char *dir,
                           uint64_t field_order,
                           FrkSystem **out);

/**
 * Opens a stored system.
 *
 * # Safety
 * `dir` must be NUL-terminated and `out` writable.
 */
FrkStatus frk_system_open(const char *dir, FrkSystem **out);

/**
 * Releases a system handle. Files on disk are untouched. Null is ignored.
 *
 * # Safety
 * `sys` must come from this library and not be used afterwards.
 */
void frk_system_free(FrkSystem *sys);

/**
 * File size `M` of a stored system, or 0 for a null handle.
 *
 * # Safety
 * `sys` must be null or come from this library.
 */
size_t frk_system_file_size(const FrkSystem *sys);

/**
 * Recovers the file from the `k` 1-based `nodes` into `buf`, which must
 * hold at least `M` values.
 *
 * # Safety
 * `sys` must come from this library; `nodes` must point to `count`
 * values and `buf` to `buf_len` writable values.
 */
FrkStatus frk_system_reconstruct(const FrkSystem *sys,
                                 const size_t *nodes,
                                 size_t count,
                                 uint32_t *buf,
                                 size_t buf_len);

/**
 * Repairs 1-based `node` by transfer and writes the download count to
 * `bandwidth` (may be null).
 *
 * # Safety
 * `sys` must come from this library; `bandwidth` null or writable.
 */
FrkStatus frk_system_repair(const FrkSystem *sys, size_t node, uint32_t policy, size_t *bandwidth);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FREPKIT_H */
