// Command-line front end over the C interface.
//
// Exit codes: 0 no free lunch / success, 1 input error, 2 free lunch found,
// 3 experiment failure.

#include "freelunch/freelunch.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kFreeLunch = 2;
constexpr int kExperimentFailure = 3;

struct MarketDeleter {
    void operator()(fl_market* m) const { fl_market_free(m); }
};
struct VerdictDeleter {
    void operator()(fl_verdict* v) const { fl_verdict_free(v); }
};
struct StringDeleter {
    void operator()(char* s) const { fl_string_free(s); }
};
using MarketPtr = std::unique_ptr<fl_market, MarketDeleter>;
using VerdictPtr = std::unique_ptr<fl_verdict, VerdictDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int report_error(const std::string& context) {
    std::cerr << "freelunch: " << context << ": " << fl_last_error() << "\n";
    return kInputError;
}

std::optional<fl_delay_mode> parse_mode(const std::string& s) {
    if (s == "info" || s == "information") return FL_DELAY_INFORMATION;
    if (s == "exec" || s == "execution") return FL_DELAY_EXECUTION;
    return std::nullopt;
}

bool emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return true;
    }
    std::ofstream file(out, std::ios::binary);
    file << text;
    return static_cast<bool>(file);
}

MarketPtr load(const std::string& path) {
    fl_market* m = nullptr;
    if (fl_market_load_file(path.c_str(), &m) != FL_OK) return nullptr;
    return MarketPtr(m);
}

int cmd_validate(const std::string& path) {
    auto m = load(path);
    if (!m) return report_error(path);
    int valid = 0;
    char* report = nullptr;
    if (fl_market_validate(m.get(), &valid, &report) != FL_OK) return report_error(path);
    StringPtr keep(report);
    std::cout << report;
    return valid ? kOk : kInputError;
}

int cmd_check(const std::string& path, int horizon, bool apply, const std::string& mode_name, const std::string& out) {
    auto m = load(path);
    if (!m) return report_error(path);
    if (apply) {
        std::optional<fl_delay_mode> mode;
        if (!mode_name.empty()) {
            mode = parse_mode(mode_name);
            if (!mode) {
                std::cerr << "freelunch: unknown delay mode '" << mode_name << "' (use info or exec)\n";
                return kInputError;
            }
        } else if (fl_market_has_delay(m.get(), FL_DELAY_INFORMATION)) {
            mode = FL_DELAY_INFORMATION;
        } else {
            mode = FL_DELAY_EXECUTION;
        }
        fl_market* delayed = nullptr;
        if (fl_market_apply_delay(m.get(), *mode, &delayed) != FL_OK) return report_error(path);
        m.reset(delayed);
    }
    fl_verdict* v = nullptr;
    if (fl_check(m.get(), horizon, &v) != FL_OK) return report_error(path);
    VerdictPtr verdict(v);
    char* text = nullptr;
    if (fl_verdict_to_json(v, &text) != FL_OK) return report_error(path);
    StringPtr keep(text);
    if (!emit(text, out)) {
        std::cerr << "freelunch: cannot write " << out << "\n";
        return kInputError;
    }
    return fl_verdict_is_free_lunch(v) ? kFreeLunch : kOk;
}

int cmd_delay(const std::string& path, const std::string& mode_name, const std::string& out) {
    const auto mode = parse_mode(mode_name);
    if (!mode) {
        std::cerr << "freelunch: unknown delay mode '" << mode_name << "' (use info or exec)\n";
        return kInputError;
    }
    auto m = load(path);
    if (!m) return report_error(path);
    fl_market* delayed = nullptr;
    if (fl_market_apply_delay(m.get(), *mode, &delayed) != FL_OK) return report_error(path);
    MarketPtr result(delayed);
    char* text = nullptr;
    if (fl_market_to_json(result.get(), &text) != FL_OK) return report_error(path);
    StringPtr keep(text);
    if (!emit(text, out)) {
        std::cerr << "freelunch: cannot write " << out << "\n";
        return kInputError;
    }
    return kOk;
}

int cmd_experiment(const std::string& kind, std::uint64_t seed, int trials, const std::string& out) {
    char* report = nullptr;
    int failures = 0;
    if (fl_run_experiment(kind.c_str(), seed, trials, &report, &failures) != FL_OK) return report_error(kind);
    StringPtr keep(report);
    if (!emit(report, out)) {
        std::cerr << "freelunch: cannot write " << out << "\n";
        return kInputError;
    }
    std::cerr << kind << ": " << trials << " trials, seed " << seed << ", " << failures << " failures\n";
    return failures == 0 ? kOk : kExperimentFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decide absence of free lunch on finite markets with information and execution delays"};
    app.require_subcommand(1);

    std::string path, mode, out, kind;
    int horizon = -1;
    bool apply = false;
    std::uint64_t seed = 1;
    int trials = 200;

    auto* validate = app.add_subcommand("validate", "Check every market invariant of a document");
    validate->add_option("file", path, "Market document")->required();

    auto* check = app.add_subcommand("check", "Print a verdict with its certificate (exit 2 on free lunch)");
    check->add_option("file", path, "Market document")->required();
    check->add_option("--horizon", horizon, "Grid time up to which trading is allowed (default n)");
    check->add_flag("--apply-delay", apply, "Apply the document's delay family first");
    check->add_option("--mode", mode, "Delay family for --apply-delay: info or exec");
    check->add_option("--out", out, "Write the verdict here instead of stdout");

    auto* delay = app.add_subcommand("delay", "Write the delayed market document");
    delay->add_option("file", path, "Market document")->required();
    delay->add_option("--mode", mode, "info or exec")->required();
    delay->add_option("--out", out, "Output document (default stdout)");

    auto* experiment = app.add_subcommand("experiment", "Run a seeded inheritance experiment (exit 3 on failure)");
    experiment->add_option("kind", kind,
                           "information, execution, broker, superimpose, representation, duality or insider-demo")
        ->required();
    experiment->add_option("--seed", seed, "Experiment seed; trial i draws from (seed, i)");
    experiment->add_option("--trials", trials, "Number of trials")->check(CLI::NonNegativeNumber);
    experiment->add_option("--out", out, "Report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    if (*validate) return cmd_validate(path);
    if (*check) return cmd_check(path, horizon, apply, mode, out);
    if (*delay) return cmd_delay(path, mode, out);
    return cmd_experiment(kind, seed, trials, out);
}
