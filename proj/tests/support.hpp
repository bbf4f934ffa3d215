#pragma once

// Shared fixtures and independent oracles for the unit tests. Nothing here
// calls into the code paths it is used to check.

#include "freelunch/market.hpp"
#include "freelunch/random.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace fltest {

using freelunch::Filtration;
using freelunch::IndexSet;
using freelunch::Market;
using freelunch::Partition;
using freelunch::Rational;
using freelunch::Rng;
using freelunch::Vec;

inline Vec vec(std::initializer_list<Rational> xs) { return Vec(xs); }

inline Vec vec_int(std::initializer_list<int> xs) {
    Vec v;
    for (int x : xs) v.emplace_back(x);
    return v;
}

inline Partition part(int n, std::vector<std::vector<int>> atoms) { return Partition(n, std::move(atoms)); }

/// One-asset, one-step binomial on states {up, down} with uniform P,
/// S_0 = s0 and S_1 = (up, down).
inline Market binomial(Rational s0, Rational up, Rational down) {
    Market m;
    m.space.states = {"up", "down"};
    m.space.probability = {Rational(1, 2), Rational(1, 2)};
    m.space.n = 1;
    m.space.n_ext = 1;
    m.asset_ids = {"S"};
    m.prices = {{Vec{s0, s0}, Vec{up, down}}};
    m.index_system = {IndexSet::singleton(0)};
    m.grand = Filtration({Partition::trivial(2), Partition::discrete(2)});
    m.trading = {m.grand};
    return m;
}

// ---- hand-rolled generators -------------------------------------------------

inline Partition gen_partition(int n, Rng& rng) {
    const int k = rng.uniform(1, n);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = rng.uniform(0, k - 1);
    return Partition::from_labels(labels);
}

/// Refinement of p obtained by relabelling inside its atoms.
inline Partition gen_refinement(const Partition& p, Rng& rng) {
    std::vector<int> labels(static_cast<std::size_t>(p.num_states()));
    int next = 0;
    for (const auto& atom : p.atoms()) {
        const int pieces = rng.uniform(1, static_cast<int>(atom.size()));
        for (int s : atom) labels[static_cast<std::size_t>(s)] = next + rng.uniform(0, pieces - 1);
        next += pieces;
    }
    return Partition::from_labels(labels);
}

inline Filtration gen_filtration(int n, int last, Rng& rng) {
    std::vector<Partition> steps{gen_partition(n, rng)};
    if (rng.chance(1, 2)) steps[0] = Partition::trivial(n);
    for (int t = 1; t <= last; ++t) steps.push_back(gen_refinement(steps.back(), rng));
    return Filtration(std::move(steps));
}

inline Vec gen_vec(int n, int lo, int hi, Rng& rng) {
    Vec v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

inline Vec gen_measure(int n, Rng& rng) {
    Vec v = gen_vec(n, 1, 7, rng);
    Rational total = 0;
    for (const auto& x : v) total += x;
    for (auto& x : v) x /= total;
    return v;
}

// ---- oracles ----------------------------------------------------------------

/// Subset of states encoded as a bit mask.
inline bool mask_measurable(std::uint32_t mask, const Partition& p) {
    for (const auto& atom : p.atoms()) {
        const bool first = (mask >> atom.front()) & 1U;
        for (int s : atom)
            if (static_cast<bool>((mask >> s) & 1U) != first) return false;
    }
    return true;
}

/// The sigma-field of the tau-past by its definition: every event F with
/// F ∩ {tau <= u} measurable at every u, found by enumerating all 2^n sets.
/// Atoms are recovered as the intersection of all members containing a state.
inline Partition brute_stopped_sigma_field(const Filtration& f, const std::vector<int>& tau, int last) {
    const int n = f.num_states();
    std::vector<std::uint32_t> members;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        bool ok = true;
        for (int u = 0; u <= last && ok; ++u) {
            std::uint32_t below = 0;
            for (int s = 0; s < n; ++s)
                if (tau[static_cast<std::size_t>(s)] <= u) below |= 1U << s;
            ok = mask_measurable(mask & below, f.at(u));
        }
        if (ok) members.push_back(mask);
    }
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        std::uint32_t atom = (1U << n) - 1;
        for (auto m : members)
            if ((m >> s) & 1U) atom &= m;
        labels[static_cast<std::size_t>(s)] = static_cast<int>(atom);
    }
    return Partition::from_labels(labels);
}

/// Rank by plain Gaussian elimination over the rationals.
inline int rank(std::vector<Vec> rows) {
    int r = 0;
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
        std::size_t pivot = static_cast<std::size_t>(r);
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[static_cast<std::size_t>(r)]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == static_cast<std::size_t>(r) || rows[i][c] == 0) continue;
            const Rational f = rows[i][c] / rows[static_cast<std::size_t>(r)][c];
            for (std::size_t k = 0; k < cols; ++k) rows[i][k] -= f * rows[static_cast<std::size_t>(r)][k];
        }
        ++r;
    }
    return r;
}

inline bool in_span(const std::vector<Vec>& rows, const Vec& v) {
    auto extended = rows;
    extended.push_back(v);
    return rank(extended) == rank(rows);
}

}  // namespace fltest
