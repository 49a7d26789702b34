/* fscdistill: learn and evaluate finite-state controllers for POMDPs.
 *
 * All functions return fsc_status; output objects are opaque handles released
 * with the matching _free function. Returned strings are owned by the handle
 * they were read from and stay valid until it is freed. On any error the
 * thread-local message from fsc_last_error() describes the failure.
 */
#ifndef FSCDISTILL_H
#define FSCDISTILL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fsc_status {
    FSC_OK = 0,
    FSC_ERR_INVALID_ARGUMENT = 1,
    FSC_ERR_IO = 2,
    FSC_ERR_PARSE = 3,
    FSC_ERR_VALIDATION = 4,
    FSC_ERR_INTERNAL = 5
} fsc_status;

typedef struct fsc_model fsc_model;
typedef struct fsc_result fsc_result;

typedef struct fsc_run_options {
    const char* objective;  /* "maxprob:<label>", "minreward:<label>", ... */
    const char* mode;       /* "table" or "belief" */
    const char* heuristic;  /* "base", "h1", "h2" or "portfolio" */
    const char* table_path; /* strategy-table CSV; required in table mode */
    int max_beliefs;
    int max_depth;
    int cutoff_strategy;    /* 0 = uniform default */
    double tolerance;
    uint64_t seed;
} fsc_run_options;

/* Fill options with defaults (belief mode, portfolio, 10000 beliefs,
 * depth 100, tolerance 1e-8). */
void fsc_run_options_init(fsc_run_options* options);

fsc_status fsc_model_load_file(const char* path, fsc_model** out);
fsc_status fsc_model_load_string(const char* json, fsc_model** out);
void fsc_model_free(fsc_model* model);

fsc_status fsc_run(const fsc_model* model, const fsc_run_options* options,
                   fsc_result** out);
void fsc_result_free(fsc_result* result);

const char* fsc_result_controller_json(const fsc_result* result);
const char* fsc_result_controller_dot(const fsc_result* result);
const char* fsc_result_report_json(const fsc_result* result);
const char* fsc_result_report_line(const fsc_result* result);
const char* fsc_result_heuristic(const fsc_result* result);
double fsc_result_value(const fsc_result* result);
int fsc_result_nodes(const fsc_result* result);
int fsc_result_mc_states(const fsc_result* result);

/* Most recent error message of the calling thread ("" when none). */
const char* fsc_last_error(void);

const char* fsc_version(void);

#ifdef __cplusplus
}
#endif

#endif /* FSCDISTILL_H */
