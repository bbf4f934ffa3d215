#include "freelunch/market.hpp"

#include "freelunch/errors.hpp"

#include <algorithm>
#include <bit>

namespace freelunch {

IndexSet IndexSet::of(std::initializer_list<int> assets) {
    std::uint64_t bits = 0;
    for (int a : assets) bits |= std::uint64_t{1} << a;
    return IndexSet(bits);
}

int IndexSet::size() const { return std::popcount(bits_); }

std::vector<int> IndexSet::members() const {
    std::vector<int> out;
    for (int a = 0; a < 64; ++a)
        if (contains(a)) out.push_back(a);
    return out;
}

std::optional<int> Market::find_index_set(IndexSet a) const {
    const auto it = std::find(index_system.begin(), index_system.end(), a);
    if (it == index_system.end()) return std::nullopt;
    return static_cast<int>(it - index_system.begin());
}

std::optional<int> Market::find_asset(const std::string& id) const {
    const auto it = std::find(asset_ids.begin(), asset_ids.end(), id);
    if (it == asset_ids.end()) return std::nullopt;
    return static_cast<int>(it - asset_ids.begin());
}

std::string Market::describe(IndexSet a) const {
    std::string out = "{";
    for (int x : a.members()) {
        if (out.size() > 1) out += ",";
        out += x < num_assets() ? asset_ids[static_cast<std::size_t>(x)] : std::to_string(x);
    }
    return out + "}";
}

std::vector<std::string> validate_market(const Market& m) {
    std::vector<std::string> issues = validate_space(m.space);
    if (!issues.empty()) return issues;
    const int n_states = m.num_states();
    const int n = m.n(), n_ext = m.n_ext();

    if (m.asset_ids.empty()) issues.emplace_back("market has no assets");
    if (m.num_assets() > 64) issues.emplace_back("more than 64 assets are not supported");
    if (m.prices.size() != m.asset_ids.size()) issues.emplace_back("price table count does not match asset count");
    if (m.grand.num_states() != n_states || m.grand.last_time() < n_ext) {
        issues.emplace_back("grand filtration must cover all states and times 0..n_ext");
        return issues;
    }
    for (const auto& msg : validate_filtration(m.grand)) issues.push_back("grand " + msg);

    for (std::size_t a = 0; a < m.prices.size() && a < m.asset_ids.size(); ++a) {
        const auto& table = m.prices[a];
        const auto& id = m.asset_ids[a];
        if (static_cast<int>(table.size()) != n_ext + 1) {
            issues.push_back("asset '" + id + "' must have prices for t=0..n_ext");
            continue;
        }
        for (int t = 0; t <= n_ext; ++t) {
            if (static_cast<int>(table[static_cast<std::size_t>(t)].size()) != n_states) {
                issues.push_back("asset '" + id + "' price row at t=" + std::to_string(t) + " has wrong length");
                continue;
            }
            if (!m.grand.at(t).measurable(table[static_cast<std::size_t>(t)]))
                issues.push_back("asset '" + id + "' price not adapted to grand filtration at t=" + std::to_string(t));
        }
    }

    if (m.index_system.empty()) issues.emplace_back("index system is empty");
    if (m.trading.size() != m.index_system.size()) {
        issues.emplace_back("trading filtration count does not match index system size");
        return issues;
    }
    const std::uint64_t all = m.num_assets() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m.num_assets()) - 1;
    for (std::size_t i = 0; i < m.index_system.size(); ++i) {
        const auto a = m.index_system[i];
        if (a.empty()) issues.emplace_back("index system contains the empty set");
        if ((a.bits() & ~all) != 0) issues.push_back("index set references unknown asset");
        for (std::size_t j = 0; j < i; ++j)
            if (m.index_system[j] == a) issues.push_back("index set " + m.describe(a) + " listed twice");
    }
    for (std::size_t i = 0; i < m.index_system.size(); ++i)
        for (std::size_t j = i + 1; j < m.index_system.size(); ++j) {
            const auto u = m.index_system[i] | m.index_system[j];
            if (!m.find_index_set(u))
                issues.push_back("refining property violated: union " + m.describe(u) + " of " +
                                 m.describe(m.index_system[i]) + " and " + m.describe(m.index_system[j]) +
                                 " is not in the index system");
        }

    bool shapes_ok = true;
    for (std::size_t k = 0; k < m.trading.size(); ++k) {
        const auto& f = m.trading[k];
        const auto name = m.describe(m.index_system[k]);
        if (f.num_states() != n_states || f.last_time() < n || f.last_time() > n_ext) {
            issues.push_back("trading filtration of " + name + " must cover times 0..n (at most 0..n_ext)");
            shapes_ok = false;
            continue;
        }
        for (const auto& msg : validate_filtration(f)) issues.push_back("trading filtration of " + name + ": " + msg);
        for (int t = 0; t <= f.last_time(); ++t)
            if (!refines(m.grand.at(t), f.at(t))) {
                issues.push_back("trading filtration of " + name + " not contained in grand filtration at t=" +
                                 std::to_string(t));
                break;
            }
    }
    if (!shapes_ok) return issues;
    for (std::size_t i = 0; i < m.index_system.size(); ++i)
        for (std::size_t j = 0; j < m.index_system.size(); ++j) {
            if (i == j || !m.index_system[i].proper_subset_of(m.index_system[j])) continue;
            const int last = std::max(m.trading[i].last_time(), m.trading[j].last_time());
            for (int t = 0; t <= last; ++t)
                if (!refines(m.trading[j].at(t), m.trading[i].at(t))) {
                    issues.push_back("monotonicity property violated: filtration of " + m.describe(m.index_system[i]) +
                                     " is not coarser than that of " + m.describe(m.index_system[j]) +
                                     " at t=" + std::to_string(t));
                    break;
                }
        }
    return issues;
}

void check_strategy(const Market& m, const Strategy& s, int horizon) {
    const auto k = m.find_index_set(s.index_set);
    if (!k) throw InvalidInput("strategy index set " + m.describe(s.index_set) + " is not in the index system");
    if (horizon < 0 || horizon > m.n_ext()) throw InvalidInput("horizon outside the grid");
    if (s.dates.empty()) throw InvalidInput("strategy has no dates");
    for (std::size_t i = 0; i < s.dates.size(); ++i) {
        if (s.dates[i] < 0 || s.dates[i] > horizon) throw InvalidInput("strategy date outside the grid");
        if (i > 0 && s.dates[i] <= s.dates[i - 1]) throw InvalidInput("strategy dates not strictly increasing");
    }
    if (s.holdings.size() + 1 != s.dates.size()) throw InvalidInput("strategy needs one holding per date interval");
    const auto assets = s.index_set.members();
    for (std::size_t i = 0; i < s.holdings.size(); ++i) {
        if (s.holdings[i].size() != assets.size()) throw InvalidInput("holding vector count does not match index set");
        const auto& sigma = m.trading_at(*k, s.dates[i]);
        for (const auto& h : s.holdings[i]) {
            if (static_cast<int>(h.size()) != m.num_states()) throw InvalidInput("holding has wrong length");
            if (!sigma.measurable(h))
                throw InvalidInput("holding not measurable w.r.t. trading filtration at t=" + std::to_string(s.dates[i]));
        }
    }
}

std::vector<Vec> wealth_process(const Market& m, const Strategy& s, std::optional<int> horizon) {
    const int last = horizon.value_or(m.n());
    check_strategy(m, s, last);
    const auto assets = s.index_set.members();
    const auto n_states = static_cast<std::size_t>(m.num_states());
    std::vector<Vec> wealth(static_cast<std::size_t>(last + 1), Vec(n_states));
    for (int t = 0; t <= last; ++t) {
        auto& row = wealth[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i + 1 < s.dates.size(); ++i) {
            const int from = s.dates[i];
            if (t <= from) continue;
            const int to = std::min(s.dates[i + 1], t);
            for (std::size_t j = 0; j < assets.size(); ++j) {
                const auto& h = s.holdings[i][j];
                const auto& end = m.price(assets[j], to);
                const auto& start = m.price(assets[j], from);
                for (std::size_t w = 0; w < n_states; ++w) row[w] += h[w] * (end[w] - start[w]);
            }
        }
    }
    return wealth;
}

std::vector<GainGenerator> gain_generators(const Market& m, std::optional<int> horizon) {
    const int last = horizon.value_or(m.n());
    if (last < 0 || last > m.n_ext()) throw InvalidInput("horizon outside the grid");
    std::vector<GainGenerator> out;
    const auto n_states = static_cast<std::size_t>(m.num_states());
    for (std::size_t k = 0; k < m.index_system.size(); ++k)
        for (int a : m.index_system[k].members())
            for (int t = 0; t < last; ++t) {
                const auto& sigma = m.trading_at(static_cast<int>(k), t);
                const auto& now = m.price(a, t);
                const auto& next = m.price(a, t + 1);
                for (int f = 0; f < sigma.size(); ++f) {
                    GainGenerator g{static_cast<int>(k), a, t, f, Vec(n_states)};
                    for (int w : sigma.atom(f))
                        g.values[static_cast<std::size_t>(w)] = next[static_cast<std::size_t>(w)] - now[static_cast<std::size_t>(w)];
                    if (!is_zero(g.values)) out.push_back(std::move(g));
                }
            }
    return out;
}

Market with_trading(const Market& m, std::vector<Filtration> trading) {
    if (trading.size() != m.index_system.size()) throw InvalidInput("trading filtration count mismatch");
    Market out = m;
    out.trading = std::move(trading);
    return out;
}

}  // namespace freelunch
