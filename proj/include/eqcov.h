/* C interface to the covariance-equality library.
 *
 * Conventions:
 *   - Every fallible call returns an eqcov_status; EQCOV_OK is zero.
 *   - On failure, out-parameters are untouched and eqcov_last_error()
 *     returns a message for the calling thread until the next call.
 *   - Returned strings are owned by the caller; release them with
 *     eqcov_string_free. Datasets are opaque handles released with
 *     eqcov_dataset_free.
 *   - `format` selects a report body: "text" or "json". Figures are
 *     produced by the *_svg calls and are complete SVG documents.
 */
#ifndef EQCOV_H
#define EQCOV_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EQCOV_API __declspec(dllexport)
#else
#define EQCOV_API __attribute__((visibility("default")))
#endif

typedef enum eqcov_status {
  EQCOV_OK = 0,
  EQCOV_E_INVALID = 1,
  EQCOV_E_PARSE = 2,
  EQCOV_E_MISSING_COLUMN = 3,
  EQCOV_E_DEGENERATE_GROUP = 4,
  EQCOV_E_UNKNOWN_DATASET = 5,
  EQCOV_E_NOT_POSITIVE_DEFINITE = 6,
  EQCOV_E_INSUFFICIENT_SAMPLE = 7,
  EQCOV_E_RANK_DEFICIENT = 8,
  EQCOV_E_DEGENERATE_DATA = 9,
  EQCOV_E_IO = 10,
  EQCOV_E_NOMEM = 11
} eqcov_status;

typedef struct eqcov_dataset eqcov_dataset;

EQCOV_API const char* eqcov_last_error(void);
EQCOV_API const char* eqcov_status_name(eqcov_status status);

EQCOV_API void eqcov_string_free(char* s);
EQCOV_API void eqcov_dataset_free(eqcov_dataset* d);

/* Parse CSV text. `variables` may be NULL with n_variables 0 to take every
 * non-group column. */
EQCOV_API eqcov_status eqcov_dataset_from_csv(const char* text,
                                              const char* group_column,
                                              const char* const* variables,
                                              size_t n_variables,
                                              eqcov_dataset** out);

/* Embedded datasets: "iris", "skulls", "wine". */
EQCOV_API eqcov_status eqcov_dataset_builtin(const char* name,
                                             eqcov_dataset** out);

EQCOV_API eqcov_status eqcov_dataset_select(const eqcov_dataset* d,
                                            const char* const* variables,
                                            size_t n_variables,
                                            eqcov_dataset** out);

EQCOV_API eqcov_status eqcov_dataset_to_csv(const eqcov_dataset* d,
                                            const char* group_column,
                                            char** out);

/* Shape queries; return 0 when d is NULL. */
EQCOV_API size_t eqcov_dataset_rows(const eqcov_dataset* d);
EQCOV_API size_t eqcov_dataset_vars(const eqcov_dataset* d);
EQCOV_API size_t eqcov_dataset_groups(const eqcov_dataset* d);

/* Equality-of-covariances test with log-determinant intervals. */
EQCOV_API eqcov_status eqcov_boxm_report(const eqcov_dataset* d,
                                         double ci_level, const char* format,
                                         char** out);
EQCOV_API eqcov_status eqcov_boxm_svg(const eqcov_dataset* d, double ci_level,
                                      char** out);

/* Eigenvalue size statistics of each group covariance and the pooled one. */
EQCOV_API eqcov_status eqcov_eigstats_report(const eqcov_dataset* d,
                                             const char* format, char** out);
EQCOV_API eqcov_status eqcov_eigstats_svg(const eqcov_dataset* d, char** out);

/* Log-eigenvalue profiles. panel_split > 0 splits the figure after that
 * dimension. */
EQCOV_API eqcov_status eqcov_scree_report(const eqcov_dataset* d,
                                          const char* format, char** out);
EQCOV_API eqcov_status eqcov_scree_svg(const eqcov_dataset* d,
                                       size_t panel_split, char** out);

/* Origin-centered pairwise covariance ellipses. */
EQCOV_API eqcov_status eqcov_ellipses_report(const eqcov_dataset* d,
                                             double coverage,
                                             const char* format, char** out);
EQCOV_API eqcov_status eqcov_ellipses_svg(const eqcov_dataset* d,
                                          double coverage, char** out);

/* Principal components of the total covariance; the figure shows group
 * covariance ellipses in the plane of two components (0-based indices). */
EQCOV_API eqcov_status eqcov_pca_report(const eqcov_dataset* d,
                                        const char* format, char** out);
EQCOV_API eqcov_status eqcov_pca_svg(const eqcov_dataset* d, size_t comp_x,
                                     size_t comp_y, double coverage,
                                     char** out);

/* One-way MANOVA on group means. */
EQCOV_API eqcov_status eqcov_manova_report(const eqcov_dataset* d,
                                           const char* format, char** out);

/* Dispersion test: MANOVA on absolute deviations from group centers.
 * `center` is "median", "mean", "trimmed" or "trimmed:<fraction>". */
EQCOV_API eqcov_status eqcov_levene_report(const eqcov_dataset* d,
                                           const char* center,
                                           const char* format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* EQCOV_H */
