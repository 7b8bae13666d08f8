#ifndef PSWF_RECON_H
#define PSWF_RECON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PswfStatus {
  PSWF_STATUS_OK = 0,
  PSWF_STATUS_NULL_POINTER = 1,
  PSWF_STATUS_INVALID_ARGUMENT = 2,
  PSWF_STATUS_OUT_OF_RANGE = 3,
  PSWF_STATUS_NUMERICAL = 4,
  PSWF_STATUS_PANIC = 5,
} PswfStatus;

/**
 * Opaque PSWF basis; create with `pswf_basis_create`, release with
 * `pswf_basis_destroy`. Immutable, so one handle may be shared by threads.
 */
typedef struct PswfBasisHandle PswfBasisHandle;

/**
 * Regularization parameters for bandwidth c, alpha and delta.
 */
typedef struct PswfRegParams {
  double c;
  double alpha;
  double delta;
  double rho;
  double tau;
  size_t n_star;
} PswfRegParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pswf_version(void);

/**
 * Message for the last failure on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pswf_last_error_message(void);

/**
 * Builds the basis up to `n_request` modes. A `lambda_floor` of 0 selects
 * the default floor; the certified count may be smaller than requested,
 * see `pswf_basis_n_max`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum PswfStatus pswf_basis_create(double c,
                                  size_t n_request,
                                  double lambda_floor,
                                  struct PswfBasisHandle **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `basis` must come from `pswf_basis_create` and not be used afterwards.
 */
void pswf_basis_destroy(struct PswfBasisHandle *basis);

/**
 * # Safety
 * `basis` must be a live handle and `out` valid for writes.
 */
enum PswfStatus pswf_basis_c(const struct PswfBasisHandle *basis, double *out);

/**
 * # Safety
 * `basis` must be a live handle and `out` valid for writes.
 */
enum PswfStatus pswf_basis_n_max(const struct PswfBasisHandle *basis, size_t *out);

/**
 * Sturm–Liouville eigenvalue chi_n.
 *
 * # Safety
 * `basis` must be a live handle and `out` valid for writes.
 */
enum PswfStatus pswf_basis_chi(const struct PswfBasisHandle *basis, size_t n, double *out);

/**
 * lambda_n = c |mu_n|^2 / (2 pi).
 *
 * # Safety
 * `basis` must be a live handle and `out` valid for writes.
 */
enum PswfStatus pswf_basis_lambda(const struct PswfBasisHandle *basis, size_t n, double *out);

/**
 * Eigenvalue mu_n of the finite Fourier operator.
 *
 * # Safety
 * `basis` must be a live handle; `re` and `im` valid for writes.
 */
enum PswfStatus pswf_basis_mu(const struct PswfBasisHandle *basis,
                              size_t n,
                              double *re,
                              double *im);

/**
 * psi_n(x) for x in [-1, 1].
 *
 * # Safety
 * `basis` must be a live handle and `out` valid for writes.
 */
enum PswfStatus pswf_basis_eval_psi(const struct PswfBasisHandle *basis,
                                    size_t n,
                                    double x,
                                    double *out);

/**
 * Number of quadrature nodes; data passed to `pswf_truncated_inverse`
 * lives on these nodes.
 *
 * # Safety
 * `basis` must be a live handle and `out` valid for writes.
 */
enum PswfStatus pswf_basis_node_count(const struct PswfBasisHandle *basis, size_t *out);

/**
 * Copies the quadrature nodes and weights; `len` must equal the node count.
 * Either output may be null to skip it.
 *
 * # Safety
 * Non-null outputs must be valid for `len` writes.
 */
enum PswfStatus pswf_basis_nodes(const struct PswfBasisHandle *basis,
                                 double *nodes,
                                 double *weights,
                                 size_t len);

/**
 * F^{-1}_{n,c}[w] on `grid`, with w sampled on the quadrature nodes.
 * `w_im` may be null for real data.
 *
 * # Safety
 * Inputs must be valid for `w_len` and `grid_len` reads, outputs for
 * `grid_len` writes.
 */
enum PswfStatus pswf_truncated_inverse(const struct PswfBasisHandle *basis,
                                       const double *w_re,
                                       const double *w_im,
                                       size_t w_len,
                                       size_t n,
                                       const double *grid,
                                       size_t grid_len,
                                       double *out_re,
                                       double *out_im);

/**
 * The unique tau > 1 with tau log tau = rho.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PswfStatus pswf_solve_tau(double rho, double *out);

/**
 * Truncation rule: rho, tau and n* for bandwidth c.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PswfStatus pswf_regularization_params(double c,
                                           double alpha,
                                           double delta,
                                           struct PswfRegParams *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSWF_RECON_H */
