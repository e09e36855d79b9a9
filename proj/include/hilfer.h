#ifndef HILFER_H
#define HILFER_H

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes for the bundled CLI:
 * 0 success, 1 verification failure, 2 configuration error,
 * 3 solver non-convergence. 4 covers unexpected internal failures. */
typedef enum hil_status {
  HIL_OK = 0,
  HIL_ERR_VERIFY = 1,
  HIL_ERR_CONFIG = 2,
  HIL_ERR_NONCONVERGENCE = 3,
  HIL_ERR_RUNTIME = 4
} hil_status;

typedef struct hil_scenario hil_scenario;

/* Library version string; storage owned by the library. */
const char* hil_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* hil_last_error(void);

/* Frees strings returned through char** out-parameters. */
void hil_text_free(char* text);

/* Loads a scenario from a file path or a builtin name
 * ("example-sec5", "linear"). On success the handle must be released
 * with hil_scenario_close. */
hil_status hil_scenario_open(const char* path_or_builtin, hil_scenario** out);
void hil_scenario_close(hil_scenario* scenario);

/* Solves the scenario and writes the trajectory CSV plus a residual
 * report under out_dir (current directory when NULL or empty). On
 * success *csv_path_out receives the CSV path (free with
 * hil_text_free); it is also populated when the solver stopped at
 * max iterations, alongside HIL_ERR_NONCONVERGENCE. */
hil_status hil_run(const hil_scenario* scenario, const char* out_dir,
                   char** csv_path_out);

/* Runs a named check suite ("specfun", "fracops", "operators",
 * "solver", "all"). *summary_out receives one line per check plus a
 * totals line (free with hil_text_free). */
hil_status hil_verify(const char* suite, char** summary_out);

/* Re-solves the scenario at `levels` mesh refinements (doubling the
 * node count each level, levels >= 2) and reports errors or residuals
 * with observed orders. *table_out receives the formatted table (free
 * with hil_text_free). */
hil_status hil_converge(const hil_scenario* scenario, int levels,
                        char** table_out);

#ifdef __cplusplus
}
#endif

#endif /* HILFER_H */
