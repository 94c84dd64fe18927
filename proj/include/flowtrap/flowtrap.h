/* C interface to the flowtrap library. All handles are opaque; every call
 * that can fail returns an ft_status and leaves a message for
 * ft_last_error() on the calling thread. Strings returned through char**
 * are owned by the caller and released with ft_string_free. */
#ifndef FLOWTRAP_FLOWTRAP_H
#define FLOWTRAP_FLOWTRAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(FLOWTRAP_BUILDING)
#define FT_API __attribute__((visibility("default")))
#else
#define FT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ft_status {
  FT_OK = 0,
  FT_INVALID_ARGUMENT = 1,
  FT_DOMAIN = 2,
  FT_INVARIANT = 3,
  FT_BUDGET = 4,
  FT_UNKNOWN_NAME = 5,
  FT_IO = 6,
  FT_INTERNAL = 99
} ft_status;

typedef enum ft_algorithm { FT_ALGO_GFT = 0, FT_ALGO_CF = 1, FT_ALGO_VAVASIS = 2, FT_ALGO_GRID = 3 } ft_algorithm;

typedef enum ft_flow_exit {
  FT_FLOW_REACHED_STATIONARY = 0,
  FT_FLOW_EXITED_RECT = 1,
  FT_FLOW_TIME_CAP = 2,
  FT_FLOW_STALLED = 3
} ft_flow_exit;

typedef struct ft_function ft_function;
typedef struct ft_oracle ft_oracle;
typedef struct ft_report ft_report;
typedef struct ft_sweep ft_sweep;

FT_API const char* ft_last_error(void);
FT_API const char* ft_status_name(ft_status s);
FT_API void ft_string_free(char* s);

/* Functions */
typedef double (*ft_value_fn)(const double* x, size_t d, void* user);
typedef void (*ft_gradient_fn)(const double* x, size_t d, double* grad_out, void* user);

FT_API ft_status ft_function_from_catalog(const char* name, size_t d, uint64_t seed, ft_function** out);
/* Divides by `smoothness` so the stored function is 1-smooth. gradient may be
 * NULL, in which case central differences are used. */
FT_API ft_status ft_function_from_callbacks(const char* name, size_t d, double smoothness, ft_value_fn value,
                                            ft_gradient_fn gradient, void* user, ft_function** out);
FT_API void ft_function_destroy(ft_function* f);
FT_API size_t ft_function_dim(const ft_function* f);
/* Uncounted evaluations. */
FT_API ft_status ft_function_value(const ft_function* f, const double* x, double* out);
FT_API ft_status ft_function_grad_norm(const ft_function* f, const double* x, double* out);

/* Counted oracle */
typedef struct ft_ledger {
  uint64_t value_queries;
  uint64_t gradient_queries;
  uint64_t depth_rounds;
} ft_ledger;

FT_API ft_status ft_oracle_create(const ft_function* f, ft_oracle** out);
FT_API void ft_oracle_destroy(ft_oracle* o);
FT_API ft_status ft_oracle_query(ft_oracle* o, const double* x, double* out);
FT_API ft_status ft_oracle_batch_query(ft_oracle* o, const double* xs, size_t n, double* out);
FT_API ft_status ft_oracle_gradient(ft_oracle* o, const double* x, double* grad_out);
FT_API ft_status ft_oracle_ledger(const ft_oracle* o, ft_ledger* out);

/* Runs */
typedef struct ft_run_options {
  double vavasis_delta; /* <= 0: eps^{4/(d+2)} */
  int record_audit;
  uint64_t grid_cap; /* 0: library default */
} ft_run_options;

typedef struct ft_report_summary {
  ft_algorithm algorithm;
  size_t d;
  double eps;
  double proj_grad_norm;
  double claim_level;
  int verified;
  uint64_t value_queries;
  uint64_t gradient_queries;
  uint64_t depth;
  uint64_t steps;
  int64_t wall_time_ms;
  int has_final_rect;
  double trap_level;
  int early_exit;
} ft_report_summary;

FT_API void ft_run_options_init(ft_run_options* opts);
FT_API ft_status ft_algorithm_from_name(const char* name, ft_algorithm* out);
FT_API const char* ft_algorithm_name(ft_algorithm a);

/* Runs on the oracle's function; the report keeps its own reference to it. */
FT_API ft_status ft_run(ft_oracle* o, ft_algorithm algo, double eps, const ft_run_options* opts, ft_report** out);
FT_API void ft_report_destroy(ft_report* r);
FT_API ft_status ft_report_summary_get(const ft_report* r, ft_report_summary* out);
FT_API ft_status ft_report_point(const ft_report* r, double* out, size_t d);
/* lo/hi receive d values each; FT_INVALID_ARGUMENT if the run has no final box. */
FT_API ft_status ft_report_final_rect(const ft_report* r, double* lo, double* hi, size_t d);
FT_API size_t ft_report_audit_count(const ft_report* r);
FT_API ft_status ft_report_audit_line(const ft_report* r, size_t i, char** out);
/* Integrates the unit-speed projected gradient flow from the report's point
 * inside its final box (the whole cube if none). level <= 0 picks the
 * certified level of the box (the claim level if there is none). */
FT_API ft_status ft_report_flow(const ft_report* r, double level, ft_flow_exit* exit_event, char** csv);

/* Audit and fitting helpers */
FT_API ft_status ft_audit_replay(const char* line, int* ok, char** message);
FT_API ft_status ft_fit_exponent(const double* eps, const double* queries, size_t n, double* slope);

/* Sweeps */
typedef struct ft_sweep_plan {
  const char* const* algorithms;
  size_t n_algorithms;
  const double* eps;
  size_t n_eps;
  const size_t* dims;
  size_t n_dims;
  const char* const* functions;
  size_t n_functions;
  uint64_t seed;
} ft_sweep_plan;

FT_API ft_status ft_sweep_run(const ft_sweep_plan* plan, const ft_run_options* opts, ft_sweep** out);
FT_API void ft_sweep_destroy(ft_sweep* s);
/* format: "csv" or "json" */
FT_API ft_status ft_sweep_render(const ft_sweep* s, const char* format, char** out);
FT_API int ft_sweep_all_verified(const ft_sweep* s);
FT_API size_t ft_sweep_run_count(const ft_sweep* s);
/* NULL when run i raised an error; see ft_sweep_run_error. */
FT_API const ft_report* ft_sweep_report(const ft_sweep* s, size_t i);
FT_API ft_status ft_sweep_run_label(const ft_sweep* s, size_t i, char** out);
FT_API ft_status ft_sweep_run_error(const ft_sweep* s, size_t i, char** out);

#ifdef __cplusplus
}
#endif

#endif
