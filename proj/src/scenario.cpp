#include "freelunch/scenario.hpp"

#include "freelunch/errors.hpp"

#include <algorithm>

namespace freelunch {
namespace {

Partition random_partition(int num_states, Rng& rng) {
    const int k = rng.uniform(1, num_states);
    std::vector<int> labels(static_cast<std::size_t>(num_states));
    for (auto& l : labels) l = rng.uniform(0, k - 1);
    return Partition::from_labels(labels);
}

// Random partition used to coarsen a filtration by intersection: sometimes
// the discrete one (no coarsening), sometimes the trivial one.
Partition random_coarsener(int num_states, Rng& rng) {
    switch (rng.uniform(0, 3)) {
    case 0: return Partition::discrete(num_states);
    case 1: return Partition::trivial(num_states);
    default: return random_partition(num_states, rng);
    }
}

Partition split_atoms(const Partition& p, Rng& rng) {
    std::vector<int> labels(static_cast<std::size_t>(p.num_states()));
    int next = 0;
    for (const auto& atom : p.atoms()) {
        const int base = next++;
        if (atom.size() < 2 || !rng.chance(1, 2)) {
            for (int s : atom) labels[static_cast<std::size_t>(s)] = base;
            continue;
        }
        const int other = next++;
        bool used_base = false, used_other = false;
        for (int s : atom) {
            const bool side = rng.chance(1, 2);
            labels[static_cast<std::size_t>(s)] = side ? other : base;
            (side ? used_other : used_base) = true;
        }
        if (!used_other) labels[static_cast<std::size_t>(atom.back())] = other;
        if (!used_base) labels[static_cast<std::size_t>(atom.front())] = base;
    }
    return Partition::from_labels(labels);
}

Vec random_measure(int num_states, int max_weight, Rng& rng) {
    Vec w(static_cast<std::size_t>(num_states));
    Rational total = 0;
    for (auto& x : w) {
        x = rng.uniform(1, max_weight);
        total += x;
    }
    for (auto& x : w) x /= total;
    return w;
}

Vec random_adapted(const Partition& p, int lo, int hi, Rng& rng) {
    Vec x(static_cast<std::size_t>(p.num_states()));
    for (const auto& atom : p.atoms()) {
        const Rational v = rng.uniform(lo, hi);
        for (int s : atom) x[static_cast<std::size_t>(s)] = v;
    }
    return x;
}

std::vector<IndexSet> union_closure(std::vector<IndexSet> sets) {
    for (bool grew = true; grew;) {
        grew = false;
        const auto current = sets;
        for (auto a : current)
            for (auto b : current) {
                const auto u = a | b;
                if (std::find(sets.begin(), sets.end(), u) == sets.end()) {
                    sets.push_back(u);
                    grew = true;
                }
            }
    }
    std::sort(sets.begin(), sets.end(), [](IndexSet a, IndexSet b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return sets;
}

std::vector<IndexSet> random_bases(const ScenarioConfig& cfg, Rng& rng) {
    const int k = cfg.num_assets;
    const auto all = IndexSet((std::uint64_t{1} << k) - 1);
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::vector<IndexSet> bases;
        if (cfg.singletons)
            for (int a = 0; a < k; ++a) bases.push_back(IndexSet::singleton(a));
        const int extra = cfg.singletons ? rng.uniform(0, 1) : rng.uniform(1, k);
        for (int i = 0; i < extra; ++i)
            bases.push_back(IndexSet(static_cast<std::uint64_t>(rng.uniform(1, (1 << std::min(k, 20)) - 1))));
        IndexSet covered;
        for (auto b : bases) covered = covered | b;
        if (covered != all) bases.push_back(IndexSet(all.bits() & ~covered.bits()));
        std::sort(bases.begin(), bases.end());
        bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
        if (static_cast<int>(union_closure(bases).size()) <= cfg.max_index_sets) return bases;
    }
    if (cfg.singletons) throw InvalidInput("index system with all singletons exceeds max_index_sets");
    return {all};
}

struct InfoStructure {
    Filtration grand;
    std::vector<IndexSet> index_system;
    std::vector<Filtration> trading;
};

InfoStructure random_information(const ScenarioConfig& cfg, Rng& rng) {
    InfoStructure out;
    out.grand = random_filtration(cfg.num_states, cfg.n_ext, rng);
    const auto bases = random_bases(cfg, rng);
    std::vector<Filtration> base_filtrations;
    for (std::size_t b = 0; b < bases.size(); ++b) {
        const int lag = rng.uniform(0, 1);
        const Partition r = random_coarsener(cfg.num_states, rng);
        std::vector<Partition> steps;
        for (int t = 0; t <= cfg.n_ext; ++t) steps.push_back(sigma_meet(out.grand.at(std::max(t - lag, 0)), r));
        base_filtrations.emplace_back(std::move(steps));
    }
    out.index_system = union_closure(bases);
    for (auto a : out.index_system) {
        std::vector<Partition> steps;
        for (int t = 0; t <= cfg.n_ext; ++t) {
            std::vector<Partition> parts;
            for (std::size_t b = 0; b < bases.size(); ++b)
                if (bases[b].subset_of(a)) parts.push_back(base_filtrations[b].at(t));
            steps.push_back(sigma_join(parts));
        }
        out.trading.emplace_back(std::move(steps));
    }
    return out;
}

Market skeleton(const ScenarioConfig& cfg, InfoStructure info, Vec probability) {
    Market m;
    for (int s = 0; s < cfg.num_states; ++s) m.space.states.push_back("w" + std::to_string(s));
    m.space.probability = std::move(probability);
    m.space.n = cfg.n;
    m.space.n_ext = cfg.n_ext;
    for (int a = 0; a < cfg.num_assets; ++a) m.asset_ids.push_back("S" + std::to_string(a + 1));
    m.grand = std::move(info.grand);
    m.index_system = std::move(info.index_system);
    m.trading = std::move(info.trading);
    return m;
}

void check_config(const ScenarioConfig& cfg) {
    if (cfg.num_states < 1 || cfg.n < 1 || cfg.n_ext < cfg.n || cfg.num_assets < 1 || cfg.num_assets > 64 ||
        cfg.max_index_sets < 1)
        throw InvalidInput("invalid scenario config");
}

// Walk with `length` +-1 increments; state i takes increment j (1-based)
// upward iff bit (length - j) of i is set, so names sort like indices.
struct Walk {
    int length;

    int states() const { return 1 << length; }
    bool up(int state, int j) const { return (state >> (length - j)) & 1; }
    std::string name(int state) const {
        std::string s;
        for (int j = 1; j <= length; ++j) s += up(state, j) ? 'u' : 'd';
        return s;
    }
    Rational value(int state, int t) const {
        int w = 0;
        for (int j = 1; j <= t; ++j) w += up(state, j) ? 1 : -1;
        return w;
    }
    Partition reveal(int steps) const {
        std::vector<int> labels(static_cast<std::size_t>(states()));
        for (int s = 0; s < states(); ++s) labels[static_cast<std::size_t>(s)] = s >> (length - steps);
        return Partition::from_labels(labels);
    }
};

Walk make_walk(int steps, int lookahead, int length, int max_states) {
    if (steps < 1 || lookahead < 0 || lookahead > steps) throw InvalidInput("insider scenario needs n >= 1 and 0 <= h <= n");
    if (length > 30 || (1 << length) > max_states)
        throw InvalidInput("insider scenario exceeds the state cap of " + std::to_string(max_states));
    return Walk{length};
}

Market walk_market(const Walk& walk, int n, int n_ext) {
    Market m;
    for (int s = 0; s < walk.states(); ++s) m.space.states.push_back(walk.name(s));
    m.space.probability.assign(static_cast<std::size_t>(walk.states()), Rational(1, walk.states()));
    m.space.n = n;
    m.space.n_ext = n_ext;
    m.asset_ids = {"S"};
    PriceTable prices;
    for (int t = 0; t <= n_ext; ++t) {
        Vec row;
        for (int s = 0; s < walk.states(); ++s) row.push_back(walk.value(s, t));
        prices.push_back(std::move(row));
    }
    m.prices = {std::move(prices)};
    m.index_system = {IndexSet::singleton(0)};
    return m;
}

// One draw of a stopping process on `info` over 0..domain with
// t <= pi(t) <= hi(t) and, when floor is given, pi >= floor.
StoppingProcess random_execution_delay(const Filtration& info, int domain, int lag, int cap, int n_ext,
                                       const StoppingProcess* floor, Rng& rng) {
    const int n_states = info.num_states();
    if (cap <= domain) throw InvalidInput("cap must exceed the delay domain");
    StoppingProcess sp;
    sp.info = info;
    std::vector<Event> prev;  // prev[s] = {pi(t-1) <= s}, s = 0..n_ext
    for (int t = 0; t <= domain; ++t) {
        int hi = std::min({t + lag, cap - 1, n_ext});
        if (floor)
            for (int w = 0; w < n_states; ++w) hi = std::max(hi, floor->at(t, w));
        std::vector<Event> cur(static_cast<std::size_t>(n_ext + 1), Event(static_cast<std::size_t>(n_states), false));
        Event acc(static_cast<std::size_t>(n_states), false);
        for (int s = 0; s <= n_ext; ++s) {
            if (s >= hi) acc.assign(static_cast<std::size_t>(n_states), true);
            else if (s >= t) {
                for (const auto& atom : info.at(s).atoms()) {
                    const auto first = static_cast<std::size_t>(atom.front());
                    if (acc[first]) continue;
                    if (!prev.empty() && !prev[static_cast<std::size_t>(s)][first]) continue;
                    if (floor && floor->at(t, atom.front()) > s) continue;
                    if (!rng.chance(1, 2)) continue;
                    for (int w : atom) acc[static_cast<std::size_t>(w)] = true;
                }
            }
            cur[static_cast<std::size_t>(s)] = acc;
        }
        std::vector<int> row(static_cast<std::size_t>(n_states));
        for (int w = 0; w < n_states; ++w) {
            int s = t;
            while (!cur[static_cast<std::size_t>(s)][static_cast<std::size_t>(w)]) ++s;
            row[static_cast<std::size_t>(w)] = s;
        }
        sp.values.push_back(std::move(row));
        prev = std::move(cur);
    }
    return sp;
}

// pi(t+1) - pi(t) in {0, 1}; a step is forced where pi(t) = t and stalled
// at the cap. Where it is free, the stall event is a union of atoms of the
// delay information at pi(t).
StoppingProcess random_continuous_delay(const Filtration& info, int domain, int lag, int cap, int n_ext,
                                        bool start_at_zero, Rng& rng) {
    const int n_states = info.num_states();
    if (cap <= domain) throw InvalidInput("cap must exceed the delay domain");
    const int top = std::min(cap - 1, n_ext);
    StoppingProcess sp;
    sp.info = info;
    std::vector<int> row(static_cast<std::size_t>(n_states), 0);
    if (!start_at_zero)
        for (const auto& atom : info.at(0).atoms()) {
            const int v = rng.uniform(0, std::min(lag, top));
            for (int w : atom) row[static_cast<std::size_t>(w)] = v;
        }
    sp.values.push_back(row);
    for (int t = 0; t < domain; ++t) {
        std::vector<int> next = row;
        for (int w = 0; w < n_states; ++w) {
            const int s = row[static_cast<std::size_t>(w)];
            if (s == t) next[static_cast<std::size_t>(w)] = s + 1;
        }
        std::vector<bool> decided(static_cast<std::size_t>(n_states), false);
        for (int w = 0; w < n_states; ++w) {
            const int s = row[static_cast<std::size_t>(w)];
            if (s == t || decided[static_cast<std::size_t>(w)]) continue;
            const auto& atom = info.at(s).atom(info.at(s).atom_of(w));
            const bool step = s < top && rng.chance(1, 2);
            for (int v : atom)
                if (row[static_cast<std::size_t>(v)] == s) {
                    decided[static_cast<std::size_t>(v)] = true;
                    next[static_cast<std::size_t>(v)] = s + (step ? 1 : 0);
                }
        }
        row = std::move(next);
        sp.values.push_back(row);
    }
    return sp;
}

}  // namespace

ScenarioConfig random_config(Rng& rng, int max_states, int max_n, int extra, int max_assets, int max_index_sets) {
    ScenarioConfig cfg;
    cfg.num_states = rng.uniform(2, max_states);
    cfg.n = rng.uniform(1, max_n);
    cfg.n_ext = cfg.n + rng.uniform(0, extra);
    cfg.num_assets = rng.uniform(1, max_assets);
    cfg.max_index_sets = max_index_sets;
    return cfg;
}

Filtration random_filtration(int num_states, int last, Rng& rng) {
    std::vector<Partition> steps;
    Partition p = Partition::trivial(num_states);
    if (rng.chance(1, 3)) p = split_atoms(p, rng);
    steps.push_back(p);
    for (int t = 1; t <= last; ++t) {
        p = split_atoms(p, rng);
        steps.push_back(p);
    }
    return Filtration(std::move(steps));
}

MartingaleMarket gen_martingale_market(const ScenarioConfig& cfg, Rng& rng) {
    check_config(cfg);
    auto info = random_information(cfg, rng);
    Vec probability = random_measure(cfg.num_states, 4, rng);
    Vec q = random_measure(cfg.num_states, 9, rng);
    Market m = skeleton(cfg, std::move(info), std::move(probability));
    for (int a = 0; a < cfg.num_assets; ++a) {
        const Vec terminal = random_adapted(m.grand.at(cfg.n_ext), 0, 8, rng);
        PriceTable table;
        for (int t = 0; t <= cfg.n_ext; ++t) table.push_back(conditional_expectation(terminal, m.grand.at(t), q));
        m.prices.push_back(std::move(table));
    }
    return {std::move(m), std::move(q)};
}

Market gen_random_market(const ScenarioConfig& cfg, Rng& rng) {
    check_config(cfg);
    auto info = random_information(cfg, rng);
    Market m = skeleton(cfg, std::move(info), random_measure(cfg.num_states, 4, rng));
    for (int a = 0; a < cfg.num_assets; ++a) {
        PriceTable table;
        for (int t = 0; t <= cfg.n_ext; ++t) table.push_back(random_adapted(m.grand.at(t), 0, 4, rng));
        m.prices.push_back(std::move(table));
    }
    return m;
}

InsiderScenario gen_insider_market(int steps, int lookahead, int max_states) {
    const Walk walk = make_walk(steps, lookahead, steps + lookahead, max_states);
    InsiderScenario out;
    Market& m = out.market;
    m = walk_market(walk, steps, steps);
    std::vector<Partition> grand, trading;
    for (int t = 0; t <= steps; ++t) {
        grand.push_back(walk.reveal(t + lookahead));
        trading.push_back(t == 0 ? Partition::trivial(walk.states()) : walk.reveal(t + lookahead));
    }
    m.grand = Filtration(std::move(grand));
    m.trading = {Filtration(std::move(trading))};

    StoppingProcess delta;
    for (int t = 0; t <= steps; ++t)
        delta.values.emplace_back(static_cast<std::size_t>(walk.states()), std::max(t - lookahead, 0));
    delta.info = Filtration::constant(Partition::trivial(walk.states()), steps);
    out.delay.delays = {std::move(delta)};
    return out;
}

InsiderExecutionScenario gen_insider_execution_market(int steps, int lookahead, int max_states) {
    const Walk walk = make_walk(steps, lookahead, steps + 2 * lookahead, max_states);
    InsiderExecutionScenario out;
    Market& m = out.market;
    const int n_ext = steps + lookahead;
    m = walk_market(walk, steps, n_ext);
    std::vector<Partition> reveal;
    for (int t = 0; t <= n_ext; ++t) reveal.push_back(walk.reveal(t + lookahead));
    m.grand = Filtration(reveal);
    m.trading = {Filtration(std::move(reveal))};

    ExecutionDelay pi;
    for (int t = 0; t <= steps; ++t) pi.process.values.emplace_back(static_cast<std::size_t>(walk.states()), t + lookahead);
    pi.process.info = Filtration::constant(Partition::trivial(walk.states()), n_ext);
    out.delay.delays = {std::move(pi)};
    return out;
}

InformationDelayFamily gen_information_family(const Market& m, Rng& rng, bool zero) {
    const int n = m.n();
    const int n_states = m.num_states();
    InformationDelayFamily out;
    for (std::size_t k = 0; k < m.index_system.size(); ++k) {
        const Partition r = random_coarsener(n_states, rng);
        std::vector<Partition> steps;
        for (int t = 0; t <= n; ++t) steps.push_back(sigma_meet(m.trading_at(static_cast<int>(k), t), r));
        StoppingProcess sp;
        sp.info = Filtration(std::move(steps));
        std::vector<Event> prev;  // prev[s] = {delta(t-1) <= s}
        for (int t = 0; t <= n; ++t) {
            if (zero) {
                sp.values.emplace_back(static_cast<std::size_t>(n_states), t);
                continue;
            }
            std::vector<Event> cur;
            Event acc(static_cast<std::size_t>(n_states), false);
            for (int s = 0; s < t; ++s) {
                for (const auto& atom : sp.info.at(s).atoms()) {
                    const auto first = static_cast<std::size_t>(atom.front());
                    if (acc[first] || !prev[static_cast<std::size_t>(s)][first] || !rng.chance(1, 2)) continue;
                    for (int w : atom) acc[static_cast<std::size_t>(w)] = true;
                }
                cur.push_back(acc);
            }
            cur.emplace_back(static_cast<std::size_t>(n_states), true);
            std::vector<int> row(static_cast<std::size_t>(n_states));
            for (int w = 0; w < n_states; ++w) {
                int s = 0;
                while (!cur[static_cast<std::size_t>(s)][static_cast<std::size_t>(w)]) ++s;
                row[static_cast<std::size_t>(w)] = s;
            }
            sp.values.push_back(std::move(row));
            prev = std::move(cur);
        }
        out.delays.push_back(std::move(sp));
    }
    return out;
}

std::vector<Filtration> gen_execution_info(const Market& m, int lag, Rng& rng) {
    std::vector<Filtration> out;
    for (int a = 0; a < m.num_assets(); ++a) {
        const Partition r = random_coarsener(m.num_states(), rng);
        std::vector<Partition> steps;
        for (int s = 0; s <= m.n_ext(); ++s) {
            std::vector<Partition> parts{r};
            for (std::size_t k = 0; k < m.index_system.size(); ++k)
                if (m.index_system[k].contains(a)) parts.push_back(m.trading_at(static_cast<int>(k), std::max(s - lag, 0)));
            if (parts.size() == 1) parts.push_back(m.grand.at(s));
            steps.push_back(sigma_meet(parts));
        }
        out.emplace_back(std::move(steps));
    }
    return out;
}

ExecutionDelayFamily gen_execution_family(const Market& m, const std::vector<Filtration>& info,
                                          const ExecutionOptions& opts, Rng& rng) {
    if (static_cast<int>(info.size()) != m.num_assets()) throw InvalidInput("one delay information per asset required");
    if (opts.domain < m.n() || opts.domain > m.n_ext()) throw InvalidInput("delay domain must lie in n..n_ext");
    ExecutionDelayFamily out;
    for (int a = 0; a < m.num_assets(); ++a) {
        ExecutionDelay d;
        if (!opts.caps.empty()) d.cap = opts.caps[static_cast<std::size_t>(a)];
        const int cap = d.effective_cap(m.n_ext());
        const auto& j = info[static_cast<std::size_t>(a)];
        d.process = opts.continuous
                        ? random_continuous_delay(j, opts.domain, opts.lag, cap, m.n_ext(), opts.start_at_zero, rng)
                        : random_execution_delay(j, opts.domain, opts.lag, cap, m.n_ext(), nullptr, rng);
        out.delays.push_back(std::move(d));
    }
    return out;
}

ExecutionDelayFamily gen_dominating_family(const Market& m, const ExecutionDelayFamily& base,
                                           const ExecutionOptions& opts, Rng& rng) {
    ExecutionDelayFamily out;
    for (int a = 0; a < m.num_assets(); ++a) {
        const auto& floor = base.delays[static_cast<std::size_t>(a)].process;
        if (opts.domain > floor.last_time()) throw InvalidInput("dominating delay outlives its base");
        ExecutionDelay d;
        if (!opts.caps.empty()) d.cap = opts.caps[static_cast<std::size_t>(a)];
        d.process = random_execution_delay(floor.info, opts.domain, opts.lag, d.effective_cap(m.n_ext()), m.n_ext(),
                                           &floor, rng);
        out.delays.push_back(std::move(d));
    }
    return out;
}

}  // namespace freelunch
