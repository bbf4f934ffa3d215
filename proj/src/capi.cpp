#include "freelunch/freelunch.h"

#include "freelunch/document.hpp"
#include "freelunch/errors.hpp"
#include "freelunch/experiment.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

struct fl_market {
    freelunch::MarketDocument doc;
};

struct fl_verdict {
    nlohmann::json json;
    bool free_lunch = false;
};

namespace {

thread_local std::string last_error;

fl_status set_error(fl_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <class F>
fl_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const freelunch::ParseError& e) {
        return set_error(FL_ERR_PARSE, e.what());
    } catch (const freelunch::InternalError& e) {
        return set_error(FL_ERR_INTERNAL, e.what());
    } catch (const freelunch::Error& e) {
        return set_error(FL_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return set_error(FL_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(FL_ERR_INTERNAL, "unknown error");
    }
}

char* duplicate(const std::string& s) {
    auto* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

fl_status require_valid(const freelunch::MarketDocument& doc) {
    const auto issues = freelunch::validate_document(doc);
    if (issues.empty()) return FL_OK;
    std::string message = "invalid market:";
    for (const auto& s : issues) message += "\n  " + s;
    return set_error(FL_ERR_INVALID, message);
}

}  // namespace

extern "C" {

const char* fl_last_error(void) { return last_error.c_str(); }

void fl_string_free(char* s) { delete[] s; }

fl_status fl_market_load_string(const char* json, fl_market** out) {
    if (!json || !out) return set_error(FL_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new fl_market{freelunch::parse_document(json)};
        return FL_OK;
    });
}

fl_status fl_market_load_file(const char* path, fl_market** out) {
    if (!path || !out) return set_error(FL_ERR_ARGUMENT, "null argument");
    std::ifstream in(path, std::ios::binary);
    if (!in) return set_error(FL_ERR_IO, std::string("cannot read ") + path);
    std::ostringstream text;
    text << in.rdbuf();
    return fl_market_load_string(text.str().c_str(), out);
}

void fl_market_free(fl_market* m) { delete m; }

fl_status fl_market_validate(const fl_market* m, int* valid, char** report_json) {
    if (!m || !valid) return set_error(FL_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        const auto issues = freelunch::validate_document(m->doc);
        *valid = issues.empty() ? 1 : 0;
        if (report_json) *report_json = duplicate(freelunch::format_json(nlohmann::json{{"valid", issues.empty()}, {"issues", issues}}));
        return FL_OK;
    });
}

int fl_market_has_delay(const fl_market* m, fl_delay_mode mode) {
    if (!m) return 0;
    return mode == FL_DELAY_INFORMATION ? m->doc.information.has_value() : m->doc.execution.has_value();
}

fl_status fl_market_apply_delay(const fl_market* m, fl_delay_mode mode, fl_market** out) {
    if (!m || !out) return set_error(FL_ERR_ARGUMENT, "null argument");
    if (!fl_market_has_delay(m, mode))
        return set_error(FL_ERR_INVALID, mode == FL_DELAY_INFORMATION ? "document has no information delay block"
                                                                       : "document has no execution delay block");
    return guarded([&] {
        if (const auto s = require_valid(m->doc); s != FL_OK) return s;
        freelunch::MarketDocument result = m->doc;
        if (mode == FL_DELAY_INFORMATION) {
            result.market = freelunch::information_delayed_market(m->doc.market, *m->doc.information);
            result.information.reset();
        } else {
            result.market = freelunch::delayed_market(m->doc.market, *m->doc.execution);
            result.execution.reset();
        }
        if (const auto s = require_valid(result); s != FL_OK) return s;
        *out = new fl_market{std::move(result)};
        return FL_OK;
    });
}

fl_status fl_market_to_json(const fl_market* m, char** out) {
    if (!m || !out) return set_error(FL_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        *out = duplicate(freelunch::serialize_document(m->doc));
        return FL_OK;
    });
}

fl_status fl_check(const fl_market* m, int horizon, fl_verdict** out) {
    if (!m || !out) return set_error(FL_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        if (const auto s = require_valid(m->doc); s != FL_OK) return s;
        const auto& market = m->doc.market;
        if (horizon > market.n_ext())
            return set_error(FL_ERR_ARGUMENT, "horizon " + std::to_string(horizon) + " exceeds n_ext = " +
                                                  std::to_string(market.n_ext()));
        const auto v = freelunch::check_naflp(market, horizon < 0 ? std::nullopt : std::optional<int>(horizon));
        *out = new fl_verdict{freelunch::verdict_to_json(market, v), v.free_lunch()};
        return FL_OK;
    });
}

int fl_verdict_is_free_lunch(const fl_verdict* v) { return v && v->free_lunch ? 1 : 0; }

fl_status fl_verdict_to_json(const fl_verdict* v, char** out) {
    if (!v || !out) return set_error(FL_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        *out = duplicate(freelunch::format_json(v->json));
        return FL_OK;
    });
}

void fl_verdict_free(fl_verdict* v) { delete v; }

fl_status fl_run_experiment(const char* kind, uint64_t seed, int trials, char** report_json, int* failures) {
    if (!kind || !report_json || !failures) return set_error(FL_ERR_ARGUMENT, "null argument");
    const auto k = freelunch::parse_experiment_kind(kind);
    if (!k) return set_error(FL_ERR_ARGUMENT, std::string("unknown experiment kind \"") + kind + "\"");
    if (trials < 0) return set_error(FL_ERR_ARGUMENT, "trial count must be non-negative");
    return guarded([&] {
        const auto report = freelunch::run_inheritance_experiment(*k, seed, trials);
        *failures = report.failures();
        *report_json = duplicate(freelunch::format_json(report.to_json()));
        return FL_OK;
    });
}

}  // extern "C"
