#ifndef SCALEDYN_SCALEDYN_H
#define SCALEDYN_SCALEDYN_H

/* C interface to the scale-dynamics Kepler library. Every function returns an
 * sd_status; on failure sd_last_error() holds a message for the calling thread. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(SCALEDYN_BUILDING_LIBRARY)
#    define SD_API __declspec(dllexport)
#  else
#    define SD_API __declspec(dllimport)
#  endif
#else
#  define SD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sd_status {
  SD_OK = 0,
  SD_ERR_NULL_POINTER = 1,
  SD_ERR_INVALID_ARGUMENT = 2,
  SD_ERR_DOMAIN = 3,
  SD_ERR_UNSUPPORTED = 4,
  SD_ERR_INDEX = 5,
  SD_ERR_INTERNAL = 6
} sd_status;

typedef struct sd_kepler sd_kepler;
typedef struct sd_ground_state sd_ground_state;
typedef struct sd_report sd_report;

typedef struct sd_kepler_params {
  double G;
  double M;
  double m;
  double lambda;
  int has_kconst; /* 0: K = m * lambda */
  double kconst;
  int eta; /* +1 or -1 */
} sd_kepler_params;

typedef struct sd_kepler_info {
  double k;
  double r0;
  double e0_paper;
  double e0_oracle;
  double kconst;
  double q;
  double orbital_speed;
  int linear_schrodinger;
} sd_kepler_info;

typedef struct sd_rotation_row {
  double r;
  double v_kepler;
  double v_scale;
  double u_over_m;    /* -U/m */
  double uadd_over_m; /* -U_add/m */
  double vsq_total;
} sd_rotation_row;

typedef enum sd_ground_state_kind { SD_GROUND_STATE_LINEAR = 0, SD_GROUND_STATE_NONLINEAR = 1 } sd_ground_state_kind;

typedef struct sd_ground_state_options {
  int has_c1; /* 0: C1 = m * lambda^2 */
  double c1;
  double c2;
} sd_ground_state_options;

typedef struct sd_ground_state_info {
  sd_ground_state_kind kind;
  double c1;
  double c2;
  double r_lower;
  double r_upper; /* infinity for the linear state */
} sd_ground_state_info;

typedef struct sd_ground_state_row {
  double r;
  double sqrt_p;
  double u_add_density;
  double u_add_closed;
} sd_ground_state_row;

typedef struct sd_virial_row {
  double r;
  double two_k_real;
  double gamma_u;
  double lambda_m_divv_real;
  double residual;
} sd_virial_row;

typedef struct sd_residual_entry {
  const char* name; /* valid until the report is destroyed */
  double max_abs_residual;
  double tolerance;
  int passed;
} sd_residual_entry;

SD_API const char* sd_version(void);
SD_API const char* sd_last_error(void);
SD_API const char* sd_status_string(sd_status status);

/* Exponential integral Ei(x), x != 0. */
SD_API sd_status sd_ei(double x, double* out);

SD_API void sd_kepler_params_default(sd_kepler_params* params);
SD_API sd_status sd_kepler_create(const sd_kepler_params* params, sd_kepler** out);
SD_API void sd_kepler_destroy(sd_kepler* sys);
SD_API sd_status sd_kepler_info_get(const sd_kepler* sys, sd_kepler_info* out);
/* rows must hold n entries; radii positive and non-decreasing. */
SD_API sd_status sd_rotation_curve(const sd_kepler* sys, const double* r, size_t n, sd_rotation_row* rows);

/* Linear state when K == m lambda, nonlinear otherwise. options may be NULL. */
SD_API sd_status sd_ground_state_create(const sd_kepler* sys, const sd_ground_state_options* options,
                                        sd_ground_state** out);
SD_API void sd_ground_state_destroy(sd_ground_state* state);
SD_API sd_status sd_ground_state_info_get(const sd_ground_state* state, sd_ground_state_info* out);
/* SD_ERR_DOMAIN when r lies outside the validity domain. */
SD_API sd_status sd_ground_state_evaluate(const sd_ground_state* state, double r, sd_ground_state_row* out);
SD_API sd_status sd_virial_balance(const sd_ground_state* state, const double* r, size_t n, sd_virial_row* rows);

SD_API sd_status sd_residual_report_create(const sd_kepler* sys, const double* r, size_t n, double energy_factor,
                                           sd_report** out);
SD_API void sd_residual_report_destroy(sd_report* report);
SD_API sd_status sd_residual_report_size(const sd_report* report, size_t* out);
SD_API sd_status sd_residual_report_entry(const sd_report* report, size_t index, sd_residual_entry* out);
SD_API sd_status sd_residual_report_passed(const sd_report* report, int* out);
/* Number of grid radii the report was evaluated at. */
SD_API sd_status sd_residual_report_radii(const sd_report* report, size_t* out);

#ifdef __cplusplus
}
#endif

#endif
