#ifndef CONE_SPECTRA_H
#define CONE_SPECTRA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. The nonzero values 1 to 3 match the command-line exit codes.
typedef enum CsStatus {
  CS_STATUS_OK = 0,
  // A mathematical invariant failed to hold.
  CS_STATUS_INVARIANT = 1,
  // Invalid parameter or configuration.
  CS_STATUS_INVALID_INPUT = 2,
  // Factorization, convergence or fitting failure.
  CS_STATUS_NUMERICAL = 3,
  CS_STATUS_NULL_POINTER = 4,
  // A Rust panic was caught at the boundary.
  CS_STATUS_INTERNAL = 5,
} CsStatus;

typedef enum CsBoundary {
  CS_BOUNDARY_DIRICHLET = 0,
  CS_BOUNDARY_NEUMANN = 1,
} CsBoundary;

// Opaque cone parameters.
typedef struct CsCone CsCone;

// Opaque counting curve.
typedef struct CsCurve CsCurve;

typedef struct CsFiber {
  uint32_t l;
  double angular_ev;
  double gamma;
  uint64_t multiplicity;
  double threshold;
} CsFiber;

typedef struct CsSample {
  double e;
  double ln_inv;
  size_t count;
  size_t lower;
  double extent_s;
  double h;
  size_t nodes;
  double threshold;
} CsSample;

typedef struct CsFit {
  double slope;
  double intercept;
  double r_squared;
  double slope_stderr;
  double predicted;
} CsFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` as a
// NUL-terminated string, truncated to `len` bytes. Returns the full
// message length without the terminator.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t cs_last_error(char *buf, size_t len);

// Validates the parameters and allocates a cone handle.
//
// # Safety
// `out` must be valid for a pointer write.
enum CsStatus cs_cone_new(uint32_t d, double theta, double alpha, struct CsCone **out);

// # Safety
// `cone` must be null or a handle from [`cs_cone_new`] not yet freed.
void cs_cone_free(struct CsCone *cone);

// Coefficients of fiber `l`.
//
// # Safety
// `cone` must be a live handle and `out` valid for a write.
enum CsStatus cs_fiber(const struct CsCone *cone, uint32_t l, struct CsFiber *out);

// Ground state of the interval δ-problem. `*found` is 0 when the interval
// carries no negative eigenvalue; the energies are then left untouched.
//
// # Safety
// The out pointers must be valid for writes.
enum CsStatus cs_interval_ground(double alpha,
                                 double half_length,
                                 enum CsBoundary bc,
                                 int32_t *found,
                                 double *energy,
                                 double *gap);

// Eigenvalues of `-d²/dx² - c/x²` on the half-line below `-e`.
//
// # Safety
// `out` must be valid for a write.
enum CsStatus cs_inverse_square_count(double c, enum CsBoundary bc, double e, size_t *out);

// Tensor-product lower bound for the axisymmetric count at depth `e` and
// length `r`.
//
// # Safety
// `cone` must be a live handle and `out` valid for a write.
enum CsStatus cs_lower_bound(const struct CsCone *cone, double r, double e, size_t *out);

// Axisymmetric eigenvalues below the mesh threshold minus `e`, on the
// wedge truncated at length `extent_s` with spacing `h`.
//
// # Safety
// `cone` must be a live handle and `out` valid for a write.
enum CsStatus cs_fiber_count(const struct CsCone *cone,
                             double extent_s,
                             double h,
                             double e,
                             size_t *out);

// Counting sweep over `n` log-spaced depths from `e_max` down to `e_min`
// with default truncation and spacing.
//
// # Safety
// `cone` must be a live handle and `out` valid for a pointer write.
enum CsStatus cs_sweep(const struct CsCone *cone,
                       double e_max,
                       double e_min,
                       size_t n,
                       size_t jobs,
                       struct CsCurve **out);

// # Safety
// `curve` must be null or a handle from [`cs_sweep`] not yet freed.
void cs_curve_free(struct CsCurve *curve);

// Number of samples, 0 for a null handle.
//
// # Safety
// `curve` must be null or a live handle.
size_t cs_curve_len(const struct CsCurve *curve);

// Sample `i`, in order of decreasing depth.
//
// # Safety
// `curve` must be a live handle and `out` valid for a write.
enum CsStatus cs_curve_sample(const struct CsCurve *curve, size_t i, struct CsSample *out);

// Log-slope fit of the curve and the predicted slope.
//
// # Safety
// `curve` must be a live handle and `out` valid for a write.
enum CsStatus cs_curve_fit(const struct CsCurve *curve, struct CsFit *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONE_SPECTRA_H */
