#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace freelunch {

enum class ExperimentKind { information, execution, broker, superimpose, representation, duality, insider_demo };

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);
std::string to_string(ExperimentKind kind);

/// Outcome of one trial. A trial whose hypothesis does not hold (e.g. the
/// min-delay market of the broker experiment has a free lunch) is vacuous:
/// it passes without exercising the conclusion.
struct TrialResult {
    int trial = 0;
    bool passed = false;
    bool vacuous = false;
    nlohmann::ordered_json detail;
};

struct ExperimentReport {
    ExperimentKind kind = ExperimentKind::information;
    std::uint64_t seed = 0;
    std::vector<TrialResult> trials;
    /// Insider control run alongside the information and execution kinds.
    std::optional<TrialResult> control;

    int failures() const;
    int vacuous() const;
    /// Per-trial verdicts, failing trials with a serialized reproduction case.
    nlohmann::ordered_json to_json() const;
};

/// Runs a single trial; the result depends on (kind, seed, trial) only.
TrialResult run_trial(ExperimentKind kind, std::uint64_t seed, int trial);

/// Runs trials 0..trials-1, spread over `threads` workers (0 = hardware
/// concurrency). Results are ordered by trial index.
ExperimentReport run_inheritance_experiment(ExperimentKind kind, std::uint64_t seed, int trials, unsigned threads = 0);

}  // namespace freelunch
