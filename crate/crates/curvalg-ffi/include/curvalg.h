#ifndef CURVALG_H
#define CURVALG_H

/* Generated by cbindgen from curvalg-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum CvStatus {
  CvStatus_Ok = 0,
  CvStatus_NullArgument = 1,
  CvStatus_InvalidUtf8 = 2,
  CvStatus_ParseError = 3,
  CvStatus_DomainError = 4,
  CvStatus_InternalError = 5,
} CvStatus;

/**
 * Quotient ring selector.
 */
typedef enum CvRing {
  CvRing_Val = 0,
  CvRing_Tilde = 1,
} CvRing;

/**
 * Output text format selector.
 */
typedef enum CvFormat {
  CvFormat_Json = 0,
  CvFormat_Csv = 1,
  CvFormat_Latex = 2,
} CvFormat;

/**
 * Opaque algebra context for one fixed `n`.
 */
typedef struct CvAlgebra CvAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the algebra context for `n >= 1`. The handle must be released
 * with `cv_algebra_free`.
 */
enum CvStatus cv_algebra_new(uint32_t n, struct CvAlgebra **out);

/**
 * Releases an algebra handle. Null is a no-op.
 */
void cv_algebra_free(struct CvAlgebra *alg);

/**
 * Releases a string returned by any query. Null is a no-op.
 */
void cv_string_free(char *s);

/**
 * The diagnostic for the most recent failure on this thread, as a fresh
 * string the caller frees; empty when no error is pending.
 */
char *cv_last_error_message(void);

/**
 * Quotient dimensions and basis size as JSON.
 */
enum CvStatus cv_dims_json(const struct CvAlgebra *alg, char **out);

/**
 * Normal form of an expression in the chosen quotient ring, as canonical
 * polynomial text.
 */
enum CvStatus cv_reduce_text(const struct CvAlgebra *alg,
                             enum CvRing ring,
                             const char *expr,
                             char **out);

/**
 * Product of two dual elements given as expressions in `t, s, v`,
 * returned as element JSON.
 */
enum CvStatus cv_dual_mul_json(const struct CvAlgebra *alg,
                               const char *left,
                               const char *right,
                               char **out);

/**
 * The local kinematic tensor in the requested format.
 */
enum CvStatus cv_local_kinematic(const struct CvAlgebra *alg, enum CvFormat format, char **out);

/**
 * The global kinematic tensor in the requested format.
 */
enum CvStatus cv_global_kinematic(const struct CvAlgebra *alg, enum CvFormat format, char **out);

/**
 * Globalizes a curvature measure passed as element JSON; returns
 * `{"n":..,"valuation":"..."}`.
 */
enum CvStatus cv_globalize_json(const struct CvAlgebra *alg, const char *element_json, char **out);

/**
 * Module-multiplies a valuation expression against a measure passed as
 * element JSON; returns the resulting element JSON.
 */
enum CvStatus cv_module_mul_json(const struct CvAlgebra *alg,
                                 const char *valuation,
                                 const char *element_json,
                                 char **out);

/**
 * The dual image of the curved generator for a rational curvature
 * parameter given as `p/q` text; returns element JSON.
 */
enum CvStatus cv_t_lambda_json(const struct CvAlgebra *alg, const char *lambda, char **out);

/**
 * Membership of `p1 + p2 w` in the curved valuation image; returns
 * `{"member":bool,"preimage":text|null}`.
 */
enum CvStatus cv_image_check_json(const struct CvAlgebra *alg,
                                  const char *lambda,
                                  const char *p1,
                                  const char *p2,
                                  char **out);

/**
 * Angularity of a valuation expression on the space form with the given
 * rational curvature parameter; returns the report JSON.
 */
enum CvStatus cv_angular_check_json(const struct CvAlgebra *alg,
                                    const char *lambda,
                                    const char *expr,
                                    char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CURVALG_H */
