/* C interface to the hypocert library. All handles are opaque; every call
 * returns a hypocert_status and, on failure, leaves a message retrievable
 * with hypocert_last_error() on the calling thread. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * hypocert_string_free(). */
#ifndef HYPOCERT_HYPOCERT_H_
#define HYPOCERT_HYPOCERT_H_

#include <stddef.h>

#if defined(HYPOCERT_BUILDING_LIBRARY)
#define HYPOCERT_API __attribute__((visibility("default")))
#else
#define HYPOCERT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hypocert_status {
  HYPOCERT_OK = 0,
  HYPOCERT_E_INVALID_ARGUMENT = 1,
  HYPOCERT_E_PARSE = 2,
  HYPOCERT_E_NOT_HERMITIAN = 3,
  HYPOCERT_E_NOT_INVERTIBLE = 4,
  HYPOCERT_E_SCHEME_INAPPLICABLE = 5,
  HYPOCERT_E_PRECONDITION = 6,
  HYPOCERT_E_NO_DECAY = 7,
  HYPOCERT_E_NUMERICAL = 8,
  HYPOCERT_E_IO = 9,
  HYPOCERT_E_INTERNAL = 10
} hypocert_status;

/* Pass as a tolerance to request the library default. */
#define HYPOCERT_DEFAULT_TOL (-1.0)
/* Pass as a cap to request dim - 1. */
#define HYPOCERT_DEFAULT_CAP (-1)
/* Index value reported when no index exists up to the cap. */
#define HYPOCERT_INDEX_NONE (-1)

typedef enum hypocert_format {
  HYPOCERT_FORMAT_JSON = 0,
  HYPOCERT_FORMAT_CSV = 1
} hypocert_format;

typedef enum hypocert_contractivity {
  HYPOCERT_CONTRACTIVE = 0,
  HYPOCERT_SEMI_CONTRACTIVE = 1,
  HYPOCERT_EXPANDING = 2
} hypocert_contractivity;

typedef enum hypocert_window_kind {
  HYPOCERT_WINDOW_ALL_TAU = 0,
  HYPOCERT_WINDOW_BOUNDED = 1,
  HYPOCERT_WINDOW_EMPTY = 2
} hypocert_window_kind;

typedef struct hypocert_matrix hypocert_matrix;

typedef struct hypocert_options {
  double tol;                 /* Hermitian classifications */
  int cap;                    /* index search cap */
  double contractivity_tol;   /* relative, norm and form routes */
  double plateau_tol;         /* ||D^j|| < 1 - plateau_tol */
} hypocert_options;

HYPOCERT_API const char* hypocert_version(void);
HYPOCERT_API const char* hypocert_last_error(void);
HYPOCERT_API const char* hypocert_status_string(hypocert_status status);
HYPOCERT_API void hypocert_string_free(char* s);
HYPOCERT_API void hypocert_options_init(hypocert_options* options);

/* ---- matrices ---------------------------------------------------------- */

/* `re_im` holds 2*dim*dim doubles: row-major (re, im) pairs. */
HYPOCERT_API hypocert_status hypocert_matrix_create(size_t dim,
                                                    const double* re_im,
                                                    hypocert_matrix** out);
HYPOCERT_API hypocert_status hypocert_matrix_parse(const char* text,
                                                   size_t length,
                                                   hypocert_matrix** out);
HYPOCERT_API hypocert_status hypocert_matrix_load(const char* path,
                                                  hypocert_matrix** out);
HYPOCERT_API void hypocert_matrix_destroy(hypocert_matrix* m);
HYPOCERT_API size_t hypocert_matrix_dim(const hypocert_matrix* m);
HYPOCERT_API hypocert_status hypocert_matrix_entry(const hypocert_matrix* m,
                                                   size_t row, size_t col,
                                                   double* re, double* im);
HYPOCERT_API hypocert_status hypocert_matrix_serialize(const hypocert_matrix* m,
                                                       char** out);

/* ---- continuous-time analysis ------------------------------------------ */

HYPOCERT_API hypocert_status hypocert_is_semi_dissipative(
    const hypocert_matrix* b, double tol, int* out_flag,
    double* out_min_eigenvalue);
HYPOCERT_API hypocert_status hypocert_is_hypocoercive(
    const hypocert_matrix* b, double tol, int* out_flag,
    double* out_min_real_part);
HYPOCERT_API hypocert_status hypocert_hc_index(const hypocert_matrix* b,
                                               double tol, int cap,
                                               int* out_index,
                                               double* out_kappa);
HYPOCERT_API hypocert_status hypocert_coercivity_bounds(
    const hypocert_matrix* b, double* out_mu, double* out_lambda_upper);

/* ---- theta schemes ----------------------------------------------------- */

/* Writes D = M_{theta,tau}(-B) as a new matrix handle. */
HYPOCERT_API hypocert_status hypocert_theta_operator(const hypocert_matrix* b,
                                                     double theta, double tau,
                                                     hypocert_matrix** out);
HYPOCERT_API hypocert_status hypocert_classify_contractivity(
    const hypocert_matrix* b, double theta, double tau, double tol,
    int* out_class, double* out_norm, double* out_form_min_eigenvalue);
HYPOCERT_API hypocert_status hypocert_is_hypocontractive(
    const hypocert_matrix* b, double theta, double tau, double tol,
    int* out_flag, double* out_spectral_radius);
HYPOCERT_API hypocert_status hypocert_dhc_index(const hypocert_matrix* b,
                                                double theta, double tau,
                                                double tol, int cap,
                                                int* out_index,
                                                double* out_kappa);
HYPOCERT_API hypocert_status hypocert_max_stepsize(const hypocert_matrix* b,
                                                   double theta, double tol,
                                                   int* out_kind,
                                                   double* out_tau0);

/* ---- asymptotics ------------------------------------------------------- */

HYPOCERT_API hypocert_status hypocert_fit_short_time_exponent(
    const hypocert_matrix* b, double t_min, double t_max, int samples,
    double* out_a, double* out_c, double* out_r_squared);
/* First j >= 1 with ||D^j|| < 1 - tol, or HYPOCERT_INDEX_NONE. */
HYPOCERT_API hypocert_status hypocert_first_contraction_index(
    const hypocert_matrix* b, double theta, double tau, int k_max, double tol,
    int* out_index);

/* ---- reports ----------------------------------------------------------- */

/* `out_exit_code` receives 0, 3 (only inapplicable schemes failed) or 4. */
HYPOCERT_API hypocert_status hypocert_analyze(
    const hypocert_matrix* b, const double* thetas, size_t n_thetas,
    const double* taus, size_t n_taus, const hypocert_options* options,
    hypocert_format format, char** out_report, int* out_exit_code);
HYPOCERT_API hypocert_status hypocert_sweep(const hypocert_matrix* b,
                                            double theta, double tau_lo,
                                            double tau_hi, int n, double tol,
                                            hypocert_format format,
                                            char** out_table,
                                            int* out_exit_code);
HYPOCERT_API hypocert_status hypocert_curve_continuous(
    const hypocert_matrix* b, double t_min, double t_max, int samples,
    hypocert_format format, char** out_table);
HYPOCERT_API hypocert_status hypocert_curve_discrete(
    const hypocert_matrix* b, double theta, double tau, int k_max, double tol,
    hypocert_format format, char** out_table);

/* Writes via a temporary file and rename. */
HYPOCERT_API hypocert_status hypocert_write_file(const char* path,
                                                 const char* content);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* HYPOCERT_HYPOCERT_H_ */
