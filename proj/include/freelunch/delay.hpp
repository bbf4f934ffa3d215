#pragma once

#include "freelunch/market.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace freelunch {

/// One information delay per member of the index system, in index_system
/// order. Each delay's info filtration must be coarser than the trading
/// filtration of its index set.
struct InformationDelayFamily {
    std::vector<StoppingProcess> delays;
};

/// Order execution delay of one asset with an optional strict cap
/// (pi(t) < cap). Without a cap, n_ext + 1 applies.
struct ExecutionDelay {
    StoppingProcess process;
    std::optional<int> cap;

    int effective_cap(int n_ext) const { return cap.value_or(n_ext + 1); }
};

/// One execution delay per asset, in asset order.
struct ExecutionDelayFamily {
    std::vector<ExecutionDelay> delays;
};

std::vector<std::string> validate_information_family(const Market& m, const InformationDelayFamily& d);
std::vector<std::string> validate_execution_family(const Market& m, const ExecutionDelayFamily& p);

/// Violations of "delay information of asset a is coarser than the trading
/// filtration of every index set containing a" (checked through n_ext).
std::vector<std::string> execution_info_within_trading(const Market& m, const ExecutionDelayFamily& p);

/// Optional modelling lint: delays should not shrink when the index set grows
/// (delta^A(t) >= delta^A'(t) for A ⊆ A'). Purely advisory.
std::vector<std::string> lint_superset_delays(const Market& m, const InformationDelayFamily& d);

/// F at delta(t), i.e. the sigma-field of the delta(t)-past, for t = 0..last.
Filtration delayed_trading_filtration(const Filtration& f, const StoppingProcess& delta);

/// Recursively delayed trading filtrations (own delay joined with the results
/// of all proper subsets in the index system), in index_system order.
std::vector<Filtration> large_delayed_filtrations(const Market& m, const InformationDelayFamily& d);

/// The market with its trading filtrations replaced by the delayed family.
Market information_delayed_market(const Market& m, const InformationDelayFamily& d);

/// True iff every delayed trading filtration is coarser than the original.
bool check_coarseness(const Market& m, const InformationDelayFamily& d);

/// Prices S^a(pi^a(t)), grand filtration joined from the stopped grand
/// filtrations; trading filtrations are kept. The new n_ext is the shortest
/// delay domain.
Market delayed_market(const Market& m, const ExecutionDelayFamily& p);

/// delta(t) = min{ s : pi(s) >= t }, capped at the horizon (default: the last
/// time of pi). The result carries the stopped delay information
/// (info of pi at pi(s)) as its own information.
StoppingProcess invert_delay(const StoppingProcess& pi, std::optional<int> horizon = std::nullopt);

/// pi_hat^a(t) = max(t, (pi^a)^{-1}(pi_tilde^a(t))), so that
/// pi^a(pi_hat^a(t)) = pi_tilde^a(t). Requires pi <= pi_tilde, discrete-continuous
/// pi and a range of pi reaching every pi_tilde value.
ExecutionDelayFamily superimpose_delays(const ExecutionDelayFamily& pi, const ExecutionDelayFamily& pi_tilde);

/// Pointwise minimum of several families sharing delay information.
ExecutionDelayFamily min_delay(std::span<const ExecutionDelayFamily> families);

/// Enlarged filtrations sigma(U_{a in A} F^A at pi^a(t)) for t = 0..n.
std::vector<Filtration> enlarged_filtrations(const Market& m, const ExecutionDelayFamily& p);

/// The inverse-delay family delta^A = min_{a in A} (pi^a)^{-1}, with the
/// enlarged filtration of A as delay information.
InformationDelayFamily inverse_delay_family(const Market& m, const ExecutionDelayFamily& p);

/// Enlarged filtrations delayed by the inverse-delay family. Does not check
/// the start condition pi(0) = 0.
std::vector<Filtration> represented_trading_filtrations(const Market& m, const ExecutionDelayFamily& p);

/// Checks that the delayed enlarged filtrations coincide with the trading
/// filtrations for every index set and t = 0..n. Throws PreconditionError
/// listing every violated precondition (singletons in the index system,
/// discrete-continuous delays starting at 0, delay information inside the
/// trading filtrations).
bool representation_check(const Market& m, const ExecutionDelayFamily& p);

}  // namespace freelunch
