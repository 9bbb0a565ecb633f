/*
 * C interface to the supersched simulator.
 *
 * Every object is an opaque handle created by a ss_*_load/parse/create style
 * call and released with the matching ss_*_free. Functions return an
 * ss_status; on failure ss_last_error() describes the problem for the calling
 * thread. Strings returned through char** out-parameters are owned by the
 * caller and released with ss_string_free.
 */
#ifndef SUPERSCHED_H
#define SUPERSCHED_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define SS_API __declspec(dllexport)
#else
#  define SS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
    SS_OK = 0,
    SS_ERR_INVALID_ARGUMENT = 1,
    SS_ERR_PARSE = 2,
    SS_ERR_INVARIANT = 3,
    SS_ERR_IO = 4,
    SS_ERR_OVERFLOW = 5,
    SS_ERR_UNSUPPORTED = 6,
    SS_ERR_INTERNAL = 99
} ss_status;

typedef enum ss_policy {
    SS_POLICY_EDF = 0,
    SS_POLICY_RM = 1,
    SS_POLICY_SUPER = 2,
    SS_POLICY_SCENARIO = -1 /* use the policy stored in the scenario */
} ss_policy;

typedef struct ss_scenario ss_scenario;
typedef struct ss_trace ss_trace;
typedef struct ss_placement ss_placement;

typedef struct ss_metrics {
    uint64_t released;
    uint64_t missed;
    uint64_t late;
    int64_t success_num;
    int64_t success_den;
    int stable;
} ss_metrics;

/* Strings point into the trace and stay valid until ss_trace_free. */
typedef struct ss_event {
    int64_t time;
    const char* kind;
    const char* job;   /* "" when the event has no job */
    int32_t processor; /* -1 when the event has no processor */
    const char* detail;
} ss_event;

SS_API const char* ss_version(void);
SS_API const char* ss_last_error(void);
SS_API const char* ss_status_name(ss_status status);
SS_API void ss_string_free(char* s);

/* scenarios */
SS_API ss_status ss_scenario_load(const char* path, ss_scenario** out);
SS_API ss_status ss_scenario_parse(const char* text, ss_scenario** out);
SS_API ss_status ss_scenario_builtin(const char* name, ss_scenario** out); /* "medium" or "large" */
SS_API ss_status ss_scenario_save(const ss_scenario* sc, const char* path);
SS_API ss_status ss_scenario_to_json(const ss_scenario* sc, char** out);
SS_API ss_status ss_scenario_policy(const ss_scenario* sc, ss_policy* out);
SS_API ss_status ss_scenario_horizon(const ss_scenario* sc, int64_t* out);
SS_API ss_status ss_scenario_task_count(const ss_scenario* sc, size_t* out);
SS_API void ss_scenario_free(ss_scenario* sc);

/* n periodic implicit-deadline tasks with total utilization num/den. */
SS_API ss_status ss_generate(int32_t n, int64_t util_num, int64_t util_den, uint64_t seed, ss_scenario** out);

/* simulation; horizon <= 0 keeps the scenario horizon */
SS_API ss_status ss_simulate(const ss_scenario* sc, ss_policy policy, int64_t horizon, ss_trace** out);
SS_API void ss_trace_free(ss_trace* tr);
SS_API ss_status ss_trace_event_count(const ss_trace* tr, size_t* out);
SS_API ss_status ss_trace_event(const ss_trace* tr, size_t index, ss_event* out);
SS_API ss_status ss_trace_csv(const ss_trace* tr, char** out);
SS_API ss_status ss_trace_write_csv(const ss_trace* tr, const char* path);
SS_API ss_status ss_trace_gantt(const ss_trace* tr, char** out);
SS_API ss_status ss_trace_metrics(const ss_trace* tr, ss_metrics* out);
SS_API ss_status ss_trace_metrics_text(const ss_trace* tr, char** out);
SS_API ss_status ss_trace_metrics_row(const ss_trace* tr, char** out);
/* SS_ERR_INVARIANT with a description in *findings when a trace invariant fails. */
SS_API ss_status ss_trace_check(const ss_trace* tr, char** findings);

/* both policies side by side; *dominance_holds is 0 when super missed more */
SS_API ss_status ss_compare(const ss_scenario* sc, char** report, int* dominance_holds);

/* primary/backup placement */
SS_API ss_status ss_allocate(const ss_scenario* sc, ss_placement** out);
SS_API void ss_placement_free(ss_placement* pl);
SS_API ss_status ss_placement_processors(const ss_placement* pl, int32_t* out);
SS_API ss_status ss_placement_lower_bound(const ss_placement* pl, int32_t* out);
SS_API ss_status ss_placement_text(const ss_placement* pl, char** out);
SS_API ss_status ss_placement_validate(const ss_placement* pl, char** findings);
SS_API ss_status ss_inject_failure(const ss_placement* pl, int32_t processor, int64_t t_fail, int64_t horizon,
                                   ss_trace** out);

/* canned experiments: "medium", "large", "sweep", "dispersion" */
SS_API ss_status ss_experiment(const char* which, const char* out_dir, char** summary, int* findings_ok);

#ifdef __cplusplus
}
#endif

#endif /* SUPERSCHED_H */
