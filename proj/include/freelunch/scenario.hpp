#pragma once

#include "freelunch/delay.hpp"
#include "freelunch/random.hpp"

#include <optional>
#include <vector>

namespace freelunch {

/// Size parameters of a generated market.
struct ScenarioConfig {
    int num_states = 6;
    int n = 2;
    int n_ext = 3;
    int num_assets = 2;
    int max_index_sets = 4;
    /// Force every singleton {a} into the index system.
    bool singletons = false;
};

/// Draws a config with num_states in [2, max_states], n in [1, max_n],
/// n_ext in [n, n + extra], num_assets in [1, max_assets].
ScenarioConfig random_config(Rng& rng, int max_states, int max_n, int extra, int max_assets, int max_index_sets);

/// Symmetric +-1 walk over n + h steps (2^(n+h) equally likely paths) whose
/// trading filtration sees h steps ahead from t = 1 on (F_0 is trivial), and
/// the delay delta(t) = max(t - h, 0) with trivial delay information.
struct InsiderScenario {
    Market market;
    InformationDelayFamily delay;
};
InsiderScenario gen_insider_market(int steps, int lookahead, int max_states = 1 << 14);

/// Walk over n + 2h steps, prices S_t = W_t up to n_ext = n + h, and
/// F_t = G_t = sigma(W_0..W_{t+h}) for every t; the delay is pi(t) = t + h.
struct InsiderExecutionScenario {
    Market market;
    ExecutionDelayFamily delay;
};
InsiderExecutionScenario gen_insider_execution_market(int steps, int lookahead, int max_states = 1 << 14);

/// Refining filtration over 0..last built by splitting random atoms.
Filtration random_filtration(int num_states, int last, Rng& rng);

/// A market whose prices are Q-martingales along a random grand filtration;
/// q certifies absence of free lunch on every horizon up to n_ext.
struct MartingaleMarket {
    Market market;
    Vec q;
};
MartingaleMarket gen_martingale_market(const ScenarioConfig& cfg, Rng& rng);

/// Same information structure as gen_martingale_market but with arbitrary
/// small integer prices adapted to the grand filtration.
Market gen_random_market(const ScenarioConfig& cfg, Rng& rng);

/// Random valid information-delay family. With zero set, delta(t) = t.
InformationDelayFamily gen_information_family(const Market& m, Rng& rng, bool zero = false);

/// Delay information for each asset: the intersection over index sets
/// containing the asset of the trading sigma-fields lagged by `lag` steps,
/// randomly coarsened. A lag at least as large as the delay reach makes every
/// delay built on it (and its inverses) a stopping time of the trading
/// filtrations.
std::vector<Filtration> gen_execution_info(const Market& m, int lag, Rng& rng);

struct ExecutionOptions {
    /// Delays are defined on 0..domain (at least n, at most n_ext).
    int domain = 0;
    /// pi(t) - t never exceeds lag.
    int lag = 1;
    /// Per-asset strict caps; empty means n_ext + 1.
    std::vector<int> caps;
    bool continuous = false;
    /// For continuous delays: pi(0) = 0, which forces pi(t) = t.
    bool start_at_zero = false;
};

/// Random execution-delay family on the given per-asset delay information.
ExecutionDelayFamily gen_execution_family(const Market& m, const std::vector<Filtration>& info,
                                          const ExecutionOptions& opts, Rng& rng);

/// Random family pi_tilde >= base on the delay information of base.
ExecutionDelayFamily gen_dominating_family(const Market& m, const ExecutionDelayFamily& base,
                                           const ExecutionOptions& opts, Rng& rng);

}  // namespace freelunch
