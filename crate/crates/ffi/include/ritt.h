/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef RITT_H
#define RITT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum RittStatus {
  RITT_STATUS_OK = 0,
  RITT_STATUS_NULL_POINTER = 1,
  RITT_STATUS_INVALID_ARGUMENT = 2,
  RITT_STATUS_BAD_LATTICE = 3,
  RITT_STATUS_NO_SUBLATTICE = 4,
  RITT_STATUS_AT_POLE = 5,
  RITT_STATUS_NUMERICAL = 6,
  RITT_STATUS_PARSE = 7,
  RITT_STATUS_TOO_MANY_BRANCHES = 8,
  RITT_STATUS_BUFFER_TOO_SMALL = 9,
  RITT_STATUS_PANIC = 10,
} RittStatus;

// Weierstrass ℘ for one lattice.
typedef struct RittEvaluator RittEvaluator;

// A radical expression in one variable.
typedef struct RittRadical RittRadical;

// A rational map R with S_Λ'(z) = R(S_Λ(z)), together with the lattices it
// was built from.
typedef struct RittRational RittRational;

// A complex number as two doubles.
typedef struct RittComplex {
  double re;
  double im;
} RittComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL after a
// successful call. Valid until the next call into the library.
const char *ritt_last_error(void);

// Releases a string returned by the library.
//
// # Safety
// `s` is NULL or a string from this library that has not been freed.
void ritt_string_free(char *s);

// Evaluator for the lattice `omega1·ℤ + omega2·ℤ` with `Im(omega2/omega1) > 0`.
//
// # Safety
// `out_evaluator` is a valid pointer.
enum RittStatus ritt_evaluator_new(struct RittComplex omega1,
                                   struct RittComplex omega2,
                                   double tol,
                                   struct RittEvaluator **out_evaluator);

// `k`-th derivative of ℘ at `z`.
//
// # Safety
// `evaluator` comes from [`ritt_evaluator_new`]; `out_value` is valid.
enum RittStatus ritt_evaluator_wp(const struct RittEvaluator *evaluator,
                                  struct RittComplex z,
                                  uint32_t k,
                                  struct RittComplex *out_value);

// Invariants `g2` and `g3` of the lattice.
//
// # Safety
// `evaluator` comes from [`ritt_evaluator_new`]; the outputs are valid.
enum RittStatus ritt_evaluator_invariants(const struct RittEvaluator *evaluator,
                                          struct RittComplex *out_g2,
                                          struct RittComplex *out_g3);

// # Safety
// `evaluator` is NULL or comes from [`ritt_evaluator_new`] and is not used again.
void ritt_evaluator_free(struct RittEvaluator *evaluator);

// Builds the degree-`p` map for a torus case ("2222", "333", "244" or
// "236"). `tau` may be NULL to use the case's default parent lattice; the
// sublattice is the invariant one of index `p` that is best conditioned.
//
// # Safety
// `case_name` is a NUL-terminated string; `tau` is NULL or valid; `out_rational` is valid.
enum RittStatus ritt_rational_build(const char *case_name,
                                    uint64_t p,
                                    const struct RittComplex *tau,
                                    double tol,
                                    struct RittRational **out_rational);

// Degree of the map.
//
// # Safety
// `rational` comes from [`ritt_rational_build`]; `out_degree` is valid.
enum RittStatus ritt_rational_degree(const struct RittRational *rational, size_t *out_degree);

// `R(w)`.
//
// # Safety
// `rational` comes from [`ritt_rational_build`]; `out_value` is valid.
enum RittStatus ritt_rational_eval(const struct RittRational *rational,
                                   struct RittComplex w,
                                   struct RittComplex *out_value);

// Largest relative error of `S_Λ'(z) = R(S_Λ(z))` over `samples` random
// points drawn from `seed`.
//
// # Safety
// `rational` comes from [`ritt_rational_build`]; `out_error` is valid.
enum RittStatus ritt_rational_verify(const struct RittRational *rational,
                                     size_t samples,
                                     uint64_t seed,
                                     double *out_error);

// The map as JSON; free the result with [`ritt_string_free`].
//
// # Safety
// `rational` comes from [`ritt_rational_build`]; `out_json` is valid.
enum RittStatus ritt_rational_to_json(const struct RittRational *rational, char **out_json);

// # Safety
// `rational` is NULL or comes from [`ritt_rational_build`] and is not used again.
void ritt_rational_free(struct RittRational *rational);

// Parses the parenthesised text form.
//
// # Safety
// `source` is a NUL-terminated string; `out_radical` is valid.
enum RittStatus ritt_radical_parse(const char *source, struct RittRadical **out_radical);

// Inverse of `z ↦ z^d`.
//
// # Safety
// `out_radical` is valid.
enum RittStatus ritt_radical_invert_power(uint32_t d, struct RittRadical **out_radical);

// Inverse of the Chebyshev polynomial `T_n`.
//
// # Safety
// `out_radical` is valid.
enum RittStatus ritt_radical_invert_chebyshev(uint32_t n, struct RittRadical **out_radical);

// Inverse of `z ↦ c[0]·z⁴ + c[1]·z³ + … + c[4]`.
//
// # Safety
// `coeffs` points to five values; `out_radical` is valid.
enum RittStatus ritt_radical_invert_quartic(const struct RittComplex *coeffs,
                                            struct RittRadical **out_radical);

// Values of the expression at `w`, one per surviving branch. The number of
// values goes to `out_count` even when `capacity` is too small, in which
// case nothing is written to `values` and `BufferTooSmall` is returned.
//
// # Safety
// `radical` is a live handle; `values` holds `capacity` entries (or is NULL
// when `capacity` is 0); `out_count` is valid.
enum RittStatus ritt_radical_eval(const struct RittRadical *radical,
                                  struct RittComplex w,
                                  struct RittComplex *values,
                                  size_t capacity,
                                  size_t *out_count);

// Text form; free the result with [`ritt_string_free`].
//
// # Safety
// `radical` is a live handle; `out_text` is valid.
enum RittStatus ritt_radical_to_text(const struct RittRadical *radical, char **out_text);

// # Safety
// `radical` is NULL or a handle that is not used again.
void ritt_radical_free(struct RittRadical *radical);

// Number of left equivalence classes of degree-`p` maps for a torus case.
//
// # Safety
// `case_name` is a NUL-terminated string; `out_count` is valid.
enum RittStatus ritt_count_left_classes(const char *case_name, uint64_t p, uint64_t *out_count);

// Genus of the covering described by local monodromies in 1-indexed cycle
// notation separated by ';', e.g. "(1 2);(1 2)".
//
// # Safety
// `perms` is a NUL-terminated string; `out_genus` is valid.
enum RittStatus ritt_monodromy_genus(const char *perms, uint64_t *out_genus);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RITT_H */
