#ifndef FBEL_FBEL_H
#define FBEL_FBEL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FBEL_API __declspec(dllexport)
#else
#define FBEL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fbel_status {
  FBEL_OK = 0,
  FBEL_ERR_INVALID_ARGUMENT = 1,
  FBEL_ERR_DOMAIN = 2,
  FBEL_ERR_NUMERICAL = 3,
  FBEL_ERR_PARSE = 4,
  FBEL_ERR_IO = 5,
  FBEL_ERR_INTERNAL = 6
} fbel_status;

typedef struct fbel_config fbel_config;
typedef struct fbel_result fbel_result;

/* Message of the last failed call on this thread; never NULL. */
FBEL_API const char* fbel_last_error(void);
FBEL_API const char* fbel_status_name(fbel_status status);
FBEL_API const char* fbel_version(void);

FBEL_API fbel_status fbel_config_create(fbel_config** out);
FBEL_API void fbel_config_destroy(fbel_config* config);
/* key as in the config file (e.g. "hurst", "weight-fn"), value as text. */
FBEL_API fbel_status fbel_config_set(fbel_config* config, const char* key, const char* value);
FBEL_API fbel_status fbel_config_load(fbel_config* config, const char* path);
/* Resolved key=value text. Writes at most capacity bytes including the
   terminator; *needed receives the full size including the terminator. */
FBEL_API fbel_status fbel_config_resolved(const fbel_config* config, char* buffer, size_t capacity,
                                          size_t* needed);

/* Runs the configured mode and writes the results and resolved-config files. */
FBEL_API fbel_status fbel_run(const fbel_config* config, fbel_result** out);
FBEL_API void fbel_result_destroy(fbel_result* result);

typedef struct fbel_row {
  const char* quantity;
  const char* component;
  double estimate;
  double std_error;  /* NaN when absent */
  size_t n_paths;
  double target;     /* NaN when absent */
  double tolerance;  /* NaN when absent */
  int pass;          /* 1 pass, 0 fail, -1 not a comparison */
} fbel_row;

FBEL_API size_t fbel_result_row_count(const fbel_result* result);
/* Strings stay valid until the result is destroyed. */
FBEL_API fbel_status fbel_result_row(const fbel_result* result, size_t index, fbel_row* row);
FBEL_API size_t fbel_result_advisory_count(const fbel_result* result);
FBEL_API const char* fbel_result_advisory(const fbel_result* result, size_t index);
FBEL_API const char* fbel_result_results_path(const fbel_result* result);
FBEL_API const char* fbel_result_config_path(const fbel_result* result);
/* 1 when a validate run had a failing check, else 0. */
FBEL_API int fbel_result_failed(const fbel_result* result);

/* Scalar helpers. */
FBEL_API fbel_status fbel_cov_rh(double h, double t, double s, double* out);
FBEL_API fbel_status fbel_kernel_kh(double h, double t, double s, double* out);
FBEL_API fbel_status fbel_c_h(double h, double* out);
FBEL_API fbel_status fbel_big_c_h(double h, double* out);
FBEL_API fbel_status fbel_gaussian_digital_delta(double x, double strike, double horizon, double h,
                                                 double* out);

#ifdef __cplusplus
}
#endif

#endif
