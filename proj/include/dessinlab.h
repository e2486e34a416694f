#ifndef DESSINLAB_H
#define DESSINLAB_H

/* C API for the dessinlab workbench. All heavy lifting lives in the C++ core;
 * this surface is what the CLI and external callers link against.
 *
 * Usage pattern:
 *   dlab_workbench *wb = NULL;
 *   dlab_workbench_create(&wb);
 *   char *report = NULL;
 *   dlab_status st = dlab_run(wb, "count", "{\"dmax\":4}", &report);
 *   ... use report (JSON) ...
 *   dlab_free_string(report);
 *   dlab_workbench_destroy(wb);
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  DLAB_OK = 0,
  DLAB_ERR_INVALID_ARG = 1,   /* bad command, malformed params, schema violation */
  DLAB_ERR_RESOURCE = 2,      /* caps exceeded (degree/truncation limits) */
  DLAB_ERR_VERIFY_FAILED = 3, /* command ran but a verification did not pass */
  DLAB_ERR_INTERNAL = 4
} dlab_status;

typedef struct dlab_workbench dlab_workbench;

/* Library version string, static storage. */
const char *dlab_version(void);

dlab_status dlab_workbench_create(dlab_workbench **out);
void dlab_workbench_destroy(dlab_workbench *wb);

/* Last error message for this workbench, static until the next call. */
const char *dlab_last_error(const dlab_workbench *wb);

/* Run a batch command. Commands: count, spectral, gkm-verify, wick-verify,
 * jacobian-mc, virasoro-check, full-suite. params_json may be NULL or "{}".
 * On success *report_json receives a malloc'd JSON document; free it with
 * dlab_free_string. Returns DLAB_ERR_VERIFY_FAILED when the report's "ok"
 * field is false (the report is still returned). */
dlab_status dlab_run(dlab_workbench *wb, const char *command, const char *params_json,
                     char **report_json);

/* Convenience: CSV table of the generating function. filter is one of
 * "all", "clean-strict", "clean-loose", "two-profile". */
dlab_status dlab_count_csv(dlab_workbench *wb, int dmax, const char *filter, int connected,
                           char **csv_out);

void dlab_free_string(char *s);

#ifdef __cplusplus
}
#endif

#endif /* DESSINLAB_H */
