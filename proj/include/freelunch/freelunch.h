#ifndef FREELUNCH_H
#define FREELUNCH_H

/* C interface of the freelunch engine. Every handle is opaque and owned by
 * the caller; strings returned through char** are released with
 * fl_string_free. On failure a function returns a non-zero fl_status and
 * fl_last_error() describes the problem (per thread). */

#include <stdint.h>

#if defined(_WIN32)
#define FL_API __declspec(dllexport)
#else
#define FL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fl_market fl_market;
typedef struct fl_verdict fl_verdict;

typedef enum fl_status {
    FL_OK = 0,
    FL_ERR_PARSE = 1,    /* malformed JSON */
    FL_ERR_INVALID = 2,  /* document or market violates an invariant */
    FL_ERR_ARGUMENT = 3, /* bad argument (null pointer, unknown kind, ...) */
    FL_ERR_IO = 4,
    FL_ERR_INTERNAL = 5  /* solver or library bug */
} fl_status;

typedef enum fl_delay_mode { FL_DELAY_INFORMATION = 0, FL_DELAY_EXECUTION = 1 } fl_delay_mode;

FL_API const char* fl_last_error(void);
FL_API void fl_string_free(char* s);

FL_API fl_status fl_market_load_file(const char* path, fl_market** out);
FL_API fl_status fl_market_load_string(const char* json, fl_market** out);
FL_API void fl_market_free(fl_market* m);

/* *valid is 1 iff the document passes every check; the report is
 * {"valid": bool, "issues": [...]}. report_json may be null. */
FL_API fl_status fl_market_validate(const fl_market* m, int* valid, char** report_json);

/* 1 iff the document carries a delay family of the given mode. */
FL_API int fl_market_has_delay(const fl_market* m, fl_delay_mode mode);

/* Applies the stored family of the given mode and drops it from the result.
 * Information mode replaces the trading filtrations by the recursively
 * delayed ones; execution mode replaces prices and grand filtration. */
FL_API fl_status fl_market_apply_delay(const fl_market* m, fl_delay_mode mode, fl_market** out);

FL_API fl_status fl_market_to_json(const fl_market* m, char** out);

/* horizon < 0 selects the trading horizon n. */
FL_API fl_status fl_check(const fl_market* m, int horizon, fl_verdict** out);
FL_API int fl_verdict_is_free_lunch(const fl_verdict* v);
FL_API fl_status fl_verdict_to_json(const fl_verdict* v, char** out);
FL_API void fl_verdict_free(fl_verdict* v);

/* kind: information, execution, broker, superimpose, representation,
 * duality or insider-demo. */
FL_API fl_status fl_run_experiment(const char* kind, uint64_t seed, int trials, char** report_json, int* failures);

#ifdef __cplusplus
}
#endif

#endif
