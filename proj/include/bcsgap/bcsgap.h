#ifndef BCSGAP_BCSGAP_H
#define BCSGAP_BCSGAP_H

#include <stddef.h>

#if defined(BCSGAP_BUILDING)
#define BCS_API __attribute__((visibility("default")))
#else
#define BCS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bcs_status {
  BCS_OK = 0,
  BCS_ERR_ARGUMENT = 1,  /* bad argument to an API call */
  BCS_ERR_CONFIG = 2,    /* invalid configuration */
  BCS_ERR_NUMERICAL = 3, /* quadrature, root finding or iteration failed */
  BCS_ERR_INTERNAL = 4
} bcs_status;

typedef struct bcs_context bcs_context;
typedef struct bcs_table bcs_table;
typedef struct bcs_report bcs_report;

BCS_API const char* bcs_version(void);

/* Every call clears its out handles first, so they are NULL after a failure. */

/* Message of the last failed call on this thread ("" if none). */
BCS_API const char* bcs_last_error(void);

BCS_API bcs_status bcs_context_load(const char* path, bcs_context** out);
BCS_API bcs_status bcs_context_parse(const char* text, bcs_context** out);
BCS_API void bcs_context_free(bcs_context* ctx);
BCS_API bcs_status bcs_context_set_quad_tol(bcs_context* ctx, double tol);
BCS_API bcs_status bcs_context_metadata(bcs_context* ctx, bcs_report** out);

BCS_API bcs_status bcs_z0(double* out);
BCS_API bcs_status bcs_universal(bcs_report** out);

/* coupling is "u1" or "u2"; t_points = 0 takes grid.t_points. */
BCS_API bcs_status bcs_simple_gap_table(bcs_context* ctx, const char* coupling, size_t t_points, bcs_table** out);
BCS_API bcs_status bcs_gap_slice(bcs_context* ctx, double T, bcs_table** out);

/* Temperature grids: t_max <= 0 means tau_2, t_points = 0 means grid.t_points,
   t_min < 0 means grid.t_min. */
BCS_API bcs_status bcs_sweep(bcs_context* ctx, double t_min, double t_max, size_t t_points, bcs_table** out);
BCS_API bcs_status bcs_tc(bcs_context* ctx, bcs_report** out);
/* tau <= 0 picks Tc (1 - 1/8). */
BCS_API bcs_status bcs_diagnose(bcs_context* ctx, double tau, bcs_report** out);
BCS_API bcs_status bcs_thermo(bcs_context* ctx, double t_min, double t_max, size_t t_points, bcs_table** out);
BCS_API bcs_status bcs_ratio(bcs_context* ctx, bcs_report** out);
BCS_API bcs_status bcs_vfun(bcs_context* ctx, bcs_table** out);
BCS_API bcs_status bcs_hc(bcs_context* ctx, double t_min, double t_max, size_t t_points, bcs_table** table,
                          bcs_report** summary);

BCS_API size_t bcs_table_rows(const bcs_table* t);
BCS_API size_t bcs_table_cols(const bcs_table* t);
BCS_API const char* bcs_table_column_name(const bcs_table* t, size_t col);
/* Row-major rows x cols values. */
BCS_API const double* bcs_table_data(const bcs_table* t);
BCS_API void bcs_table_free(bcs_table* t);

BCS_API size_t bcs_report_size(const bcs_report* r);
BCS_API const char* bcs_report_key(const bcs_report* r, size_t i);
BCS_API const char* bcs_report_value(const bcs_report* r, size_t i);
/* NaN for text entries. */
BCS_API double bcs_report_number(const bcs_report* r, size_t i);
/* Returns 1 and stores the number when key exists, else 0. */
BCS_API int bcs_report_find(const bcs_report* r, const char* key, double* value);
BCS_API void bcs_report_free(bcs_report* r);

#ifdef __cplusplus
}
#endif

#endif
