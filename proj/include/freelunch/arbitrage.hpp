#pragma once

#include "freelunch/errors.hpp"
#include "freelunch/market.hpp"

#include <optional>
#include <variant>

namespace freelunch {

/// A simple strategy whose terminal wealth is nonnegative and nonzero.
struct FreeLunchCertificate {
    Strategy strategy;
    Vec terminal_wealth;
};

/// A strictly positive measure under which every asset's optional projection
/// onto each trading filtration is a martingale.
struct MartingaleMeasureCertificate {
    Vec q;
};

struct Verdict {
    int horizon = 0;
    std::variant<MartingaleMeasureCertificate, FreeLunchCertificate> certificate;

    bool free_lunch() const { return std::holds_alternative<FreeLunchCertificate>(certificate); }
    const FreeLunchCertificate& lunch() const { return std::get<FreeLunchCertificate>(certificate); }
    const MartingaleMeasureCertificate& measure() const { return std::get<MartingaleMeasureCertificate>(certificate); }
};

/// Both oracles succeeded or both failed. Cannot happen on a finite space;
/// signals a solver bug.
class OracleDisagreement : public InternalError {
public:
    using InternalError::InternalError;
};

/// Searches the attainable terminal wealths for v >= 0, v != 0 (maximizing
/// the total mass of v under v <= 1). Horizon defaults to n.
std::optional<FreeLunchCertificate> find_free_lunch(const Market& m, std::optional<int> horizon = std::nullopt);

/// Searches for a strictly positive q annihilating every one-step gain,
/// maximizing its smallest entry.
std::optional<MartingaleMeasureCertificate> find_martingale_measure(const Market& m,
                                                                    std::optional<int> horizon = std::nullopt);

/// Runs both oracles, requires exactly one certificate and re-verifies it.
Verdict check_naflp(const Market& m, std::optional<int> horizon = std::nullopt);

/// Re-checks the embedded certificate from scratch: conditional expectations
/// for every pair t <= u for measures, wealth_process for strategies.
bool verify_certificate(const Market& m, const Verdict& v);

}  // namespace freelunch
