/* Exercises the shared library through its C header only. */
#include "freelunch/freelunch.h"

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                      \
    do {                                                                  \
        if (!(cond)) {                                                    \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                   \
        }                                                                 \
    } while (0)

static char* path(const char* dir, const char* rel) {
    size_t n = strlen(dir) + strlen(rel) + 2;
    char* p = malloc(n);
    snprintf(p, n, "%s/%s", dir, rel);
    return p;
}

static int check_file(const char* dir, const char* rel, int apply, int expect_lunch) {
    char* p = path(dir, rel);
    fl_market* m = NULL;
    fl_market* delayed = NULL;
    fl_verdict* v = NULL;
    int lunch = -1;
    EXPECT(fl_market_load_file(p, &m) == FL_OK);
    free(p);
    if (!m) return -1;
    if (apply) {
        EXPECT(fl_market_has_delay(m, FL_DELAY_INFORMATION) || fl_market_has_delay(m, FL_DELAY_EXECUTION));
        fl_delay_mode mode = fl_market_has_delay(m, FL_DELAY_INFORMATION) ? FL_DELAY_INFORMATION : FL_DELAY_EXECUTION;
        EXPECT(fl_market_apply_delay(m, mode, &delayed) == FL_OK);
        EXPECT(!fl_market_has_delay(delayed, mode));
    }
    EXPECT(fl_check(apply ? delayed : m, -1, &v) == FL_OK);
    if (v) {
        char* json = NULL;
        lunch = fl_verdict_is_free_lunch(v);
        EXPECT(fl_verdict_to_json(v, &json) == FL_OK);
        EXPECT(json && strstr(json, expect_lunch ? "\"free_lunch\"" : "\"no_free_lunch\""));
        fl_string_free(json);
    }
    EXPECT(lunch == expect_lunch);
    fl_verdict_free(v);
    fl_market_free(delayed);
    fl_market_free(m);
    return lunch;
}

int main(int argc, char** argv) {
    const char* dir = argc > 1 ? argv[1] : ".";
    fl_market* m = NULL;
    fl_verdict* v = NULL;
    char* report = NULL;
    int valid = -1;
    int fails = -1;

    check_file(dir, "scenarios/binomial.json", 0, 0);
    check_file(dir, "scenarios/dominated.json", 0, 1);
    check_file(dir, "scenarios/insider.json", 0, 1);
    check_file(dir, "scenarios/insider.json", 1, 0);
    check_file(dir, "scenarios/insider_execution.json", 0, 1);
    check_file(dir, "scenarios/insider_execution.json", 1, 0);

    EXPECT(fl_market_load_string("{\"format_version\": 1,", &m) == FL_ERR_PARSE);
    EXPECT(m == NULL);
    EXPECT(strstr(fl_last_error(), "malformed JSON") != NULL);
    EXPECT(fl_market_load_string("{\"format_version\": 1, \"bogus\": 0}", &m) == FL_ERR_INVALID);
    EXPECT(fl_market_load_file("/nonexistent/market.json", &m) == FL_ERR_IO);
    EXPECT(fl_market_load_string(NULL, &m) == FL_ERR_ARGUMENT);

    char* p = path(dir, "tests/data/unnormalized.json");
    EXPECT(fl_market_load_file(p, &m) == FL_OK);
    free(p);
    EXPECT(fl_market_validate(m, &valid, &report) == FL_OK);
    EXPECT(valid == 0);
    EXPECT(report && strstr(report, "measure not normalized (total mass 9/10)"));
    fl_string_free(report);
    report = NULL;
    EXPECT(fl_check(m, -1, &v) == FL_ERR_INVALID);
    EXPECT(fl_market_apply_delay(m, FL_DELAY_INFORMATION, NULL) == FL_ERR_ARGUMENT);
    fl_market_free(m);
    m = NULL;

    p = path(dir, "scenarios/binomial.json");
    EXPECT(fl_market_load_file(p, &m) == FL_OK);
    free(p);
    EXPECT(fl_check(m, 5, &v) != FL_OK);
    fl_delay_mode mode = FL_DELAY_EXECUTION;
    fl_market* out = NULL;
    EXPECT(fl_market_apply_delay(m, mode, &out) == FL_ERR_INVALID);
    EXPECT(fl_market_to_json(m, &report) == FL_OK);
    EXPECT(report && strstr(report, "\"format_version\": 1"));
    fl_string_free(report);
    fl_market_free(m);

    EXPECT(fl_run_experiment("duality", 1, 5, &report, &fails) == FL_OK);
    EXPECT(fails == 0);
    EXPECT(report && strstr(report, "\"kind\": \"duality\""));
    fl_string_free(report);
    EXPECT(fl_run_experiment("bogus", 1, 5, &report, &fails) == FL_ERR_ARGUMENT);

    if (failures) fprintf(stderr, "%d capi expectation(s) failed\n", failures);
    else printf("capi: all expectations met\n");
    return failures ? 1 : 0;
}
