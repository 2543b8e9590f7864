/* C interface to the goco projection-free online learning library.
 *
 * Every function returns a goco_status. On failure a human-readable message is
 * available from goco_last_error() on the calling thread until the next call.
 * Objects are opaque handles released with their matching *_free function.
 */
#ifndef GOCO_GOCO_H
#define GOCO_GOCO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GOCO_BUILDING_LIBRARY)
#    define GOCO_API __declspec(dllexport)
#  else
#    define GOCO_API __declspec(dllimport)
#  endif
#else
#  define GOCO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum goco_status {
  GOCO_OK = 0,
  GOCO_ERR_INVALID_ARGUMENT = 1,
  GOCO_ERR_DIMENSION = 2,
  GOCO_ERR_CONFIG = 3,
  GOCO_ERR_UNSUPPORTED = 4,
  GOCO_ERR_NUMERIC = 5,
  GOCO_ERR_IO = 6,
  GOCO_ERR_INTERNAL = 7,
  GOCO_ERR_NULL_ARGUMENT = 8
} goco_status;

typedef struct goco_body goco_body;
typedef struct goco_report goco_report;

/* Overrides applied on top of a config document. Zero-initialise for none. */
typedef struct goco_run_options {
  int has_seed;
  uint64_t seed;
  const char* out_dir;       /* NULL: use the config's output.dir, if any */
  int full_interval_scan;    /* non-zero forces the O(T^2) scan (T <= 2000) */
  int write_artifacts;       /* non-zero writes CSV + summary JSON */
} goco_run_options;

typedef void (*goco_check_callback)(const char* name, int passed, const char* detail, void* user);

GOCO_API const char* goco_version(void);
GOCO_API const char* goco_last_error(void);
GOCO_API const char* goco_status_string(goco_status status);

/* Bodies, from the "body" object of the config schema. */
GOCO_API goco_status goco_body_create(const char* body_json, goco_body** out);
GOCO_API void goco_body_free(goco_body* body);
GOCO_API goco_status goco_body_dim(const goco_body* body, int* out);
GOCO_API goco_status goco_body_geometry(const goco_body* body, double* inner_radius, double* diameter);
GOCO_API goco_status goco_body_contains(const goco_body* body, const double* x, size_t dim, int* inside);
GOCO_API goco_status goco_body_calls(const goco_body* body, uint64_t* calls);
GOCO_API goco_status goco_body_reset_calls(goco_body* body);

/* Approximate gauge by bisection. `projection` may be NULL, otherwise it
 * receives x / gamma (dim entries). */
GOCO_API goco_status goco_gauge(const goco_body* body, const double* x, size_t dim, double tolerance,
                                double* gamma, double* projection, uint64_t* calls_used);

/* Experiments. */
GOCO_API goco_status goco_run(const char* config_json, const goco_run_options* options, goco_report** out);
GOCO_API void goco_report_free(goco_report* report);
GOCO_API goco_status goco_report_horizon(const goco_report* report, int* horizon);
GOCO_API goco_status goco_report_cumulative_regret(const goco_report* report, double* regret);
GOCO_API goco_status goco_report_worst_interval(const goco_report* report, int* start, int* end, double* regret);
GOCO_API goco_status goco_report_total_calls(const goco_report* report, uint64_t* calls);
GOCO_API goco_status goco_report_round(const goco_report* report, int t, double* player_loss, uint64_t* calls,
                                       uint32_t* events);
/* Borrowed strings, valid until goco_report_free. */
GOCO_API const char* goco_report_summary_json(const goco_report* report);
GOCO_API const char* goco_report_csv(const goco_report* report);
GOCO_API goco_status goco_report_write(const goco_report* report, const char* dir);

/* Runs the config once per horizon; *summary_json is released with goco_string_free. */
GOCO_API goco_status goco_sweep(const char* config_json, const int* horizons, size_t count,
                                const goco_run_options* options, char** summary_json);
GOCO_API void goco_string_free(char* s);

/* JSON text of a config compiled into the library, e.g. "negative_control".
 * Released with goco_string_free. */
GOCO_API goco_status goco_builtin_config(const char* name, char** config_json);

/* Invariant suite. `callback` may be NULL. */
GOCO_API goco_status goco_verify(uint64_t seed, goco_check_callback callback, void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* GOCO_GOCO_H */
