#include "freelunch/arbitrage.hpp"

#include "freelunch/errors.hpp"
#include "freelunch/lp.hpp"

#include <algorithm>

namespace freelunch {
namespace {

int resolve_horizon(const Market& m, std::optional<int> horizon) {
    const int h = horizon.value_or(m.n());
    if (h < 0 || h > m.n_ext()) throw InvalidInput("horizon " + std::to_string(h) + " outside 0..n_ext");
    return h;
}

void require_valid(const Market& m) {
    auto issues = validate_market(m);
    if (!issues.empty()) throw PreconditionError(std::move(issues));
}

// Greedy exact elimination: positions of a maximal linearly independent
// subset, in input order.
std::vector<std::size_t> independent_subset(const std::vector<GainGenerator>& gens) {
    std::vector<Vec> reduced;       // echelon rows
    std::vector<std::size_t> pivot;  // pivot coordinate per echelon row
    std::vector<std::size_t> keep;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        Vec v = gens[g].values;
        for (std::size_t r = 0; r < reduced.size(); ++r) {
            const Rational& c = v[pivot[r]];
            if (c == 0) continue;
            const Rational factor = c;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (reduced[r][i] != 0) v[i] -= factor * reduced[r][i];
        }
        const auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
        if (it == v.end()) continue;
        const auto p = static_cast<std::size_t>(it - v.begin());
        const Rational lead = v[p];
        for (auto& x : v) x /= lead;
        reduced.push_back(std::move(v));
        pivot.push_back(p);
        keep.push_back(g);
    }
    return keep;
}

Strategy strategy_from(const Market& m, const std::vector<GainGenerator>& gens,
                       const std::vector<std::size_t>& basis, const Vec& weights, int horizon) {
    IndexSet all;
    for (std::size_t j = 0; j < basis.size(); ++j)
        if (weights[j] != 0) all = all | m.index_system[static_cast<std::size_t>(gens[basis[j]].index_set_pos)];
    // the union of index sets is again a member (refining property)
    if (!m.find_index_set(all)) throw InternalError("union of participating index sets missing");
    const auto assets = all.members();
    Strategy s;
    s.index_set = all;
    for (int t = 0; t <= horizon; ++t) s.dates.push_back(t);
    const auto n_states = static_cast<std::size_t>(m.num_states());
    s.holdings.assign(static_cast<std::size_t>(horizon), std::vector<Vec>(assets.size(), Vec(n_states)));
    for (std::size_t j = 0; j < basis.size(); ++j) {
        if (weights[j] == 0) continue;
        const auto& g = gens[basis[j]];
        const auto slot = static_cast<std::size_t>(std::find(assets.begin(), assets.end(), g.asset) - assets.begin());
        const auto& atom = m.trading_at(g.index_set_pos, g.time).atom(g.atom);
        for (int w : atom) s.holdings[static_cast<std::size_t>(g.time)][slot][static_cast<std::size_t>(w)] += weights[j];
    }
    return s;
}

}  // namespace

std::optional<FreeLunchCertificate> find_free_lunch(const Market& m, std::optional<int> horizon) {
    require_valid(m);
    const int h = resolve_horizon(m, horizon);
    const auto gens = gain_generators(m, h);
    const auto basis = independent_subset(gens);
    if (basis.empty()) return std::nullopt;

    const auto n_states = static_cast<std::size_t>(m.num_states());
    const auto r = static_cast<int>(basis.size());
    lp::Problem p(r);
    for (int j = 0; j < r; ++j) p.make_free(j);
    for (std::size_t w = 0; w < n_states; ++w) {
        Vec row(basis.size());
        for (std::size_t j = 0; j < basis.size(); ++j) row[j] = gens[basis[j]].values[w];
        for (std::size_t j = 0; j < basis.size(); ++j) p.objective[j] += row[j];
        Vec neg = row;
        for (auto& x : neg) x = -x;
        p.add_inequality(std::move(row), 1);
        p.add_inequality(std::move(neg), 0);
    }
    const auto out = lp::solve(p);
    if (out.status != lp::Status::optimal) throw InternalError("free-lunch LP is not optimal");
    if (out.objective_value <= 0) return std::nullopt;

    FreeLunchCertificate cert;
    cert.strategy = strategy_from(m, gens, basis, out.solution, h);
    cert.terminal_wealth.assign(n_states, Rational(0));
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t w = 0; w < n_states; ++w) cert.terminal_wealth[w] += out.solution[j] * gens[basis[j]].values[w];
    return cert;
}

std::optional<MartingaleMeasureCertificate> find_martingale_measure(const Market& m, std::optional<int> horizon) {
    require_valid(m);
    const int h = resolve_horizon(m, horizon);
    const auto gens = gain_generators(m, h);
    const auto basis = independent_subset(gens);
    const auto n_states = static_cast<std::size_t>(m.num_states());
    const auto eps = n_states;  // variable layout: q_0..q_{n-1}, eps

    lp::Problem p(static_cast<int>(n_states + 1));
    p.objective[eps] = 1;
    p.add_equality(Vec(n_states + 1, Rational(1)), 1);
    p.equalities.back().row[eps] = 0;
    for (std::size_t j : basis) {
        Vec row = gens[j].values;
        row.emplace_back(0);
        p.add_equality(std::move(row), 0);
    }
    for (std::size_t w = 0; w < n_states; ++w) {
        Vec row(n_states + 1);
        row[w] = -1;
        row[eps] = 1;
        p.add_inequality(std::move(row), 0);
    }
    const auto out = lp::solve(p);
    if (out.status == lp::Status::infeasible) return std::nullopt;
    if (out.status != lp::Status::optimal) throw InternalError("martingale-measure LP is unbounded");
    if (out.solution[eps] <= 0) return std::nullopt;
    return MartingaleMeasureCertificate{Vec(out.solution.begin(), out.solution.begin() + static_cast<std::ptrdiff_t>(n_states))};
}

Verdict check_naflp(const Market& m, std::optional<int> horizon) {
    const int h = resolve_horizon(m, horizon);
    auto lunch = find_free_lunch(m, h);
    auto measure = find_martingale_measure(m, h);
    if (lunch.has_value() == measure.has_value())
        throw OracleDisagreement(lunch ? "both a free lunch and a martingale measure were found"
                                       : "neither a free lunch nor a martingale measure was found");
    Verdict v;
    v.horizon = h;
    if (lunch) v.certificate = std::move(*lunch);
    else v.certificate = std::move(*measure);
    if (!verify_certificate(m, v)) throw InternalError("emitted certificate failed verification");
    return v;
}

bool verify_certificate(const Market& m, const Verdict& v) {
    if (v.horizon < 0 || v.horizon > m.n_ext()) return false;
    const auto n_states = static_cast<std::size_t>(m.num_states());
    if (!v.free_lunch()) {
        const auto& q = v.measure().q;
        if (q.size() != n_states) return false;
        Rational total = 0;
        for (const auto& x : q) {
            if (x <= 0) return false;
            total += x;
        }
        if (total != 1) return false;
        for (std::size_t k = 0; k < m.index_system.size(); ++k)
            for (int a : m.index_system[k].members())
                for (int t = 0; t <= v.horizon; ++t) {
                    const auto& sigma = m.trading_at(static_cast<int>(k), t);
                    const Vec now = conditional_expectation(m.price(a, t), sigma, q);
                    for (int u = t + 1; u <= v.horizon; ++u)
                        if (conditional_expectation(m.price(a, u), sigma, q) != now) return false;
                }
        return true;
    }
    const auto& cert = v.lunch();
    std::vector<Vec> wealth;
    try {
        wealth = wealth_process(m, cert.strategy, v.horizon);
    } catch (const Error&) {
        return false;
    }
    if (!is_zero(wealth.front())) return false;
    if (wealth.back() != cert.terminal_wealth) return false;
    if (is_zero(cert.terminal_wealth)) return false;
    return std::all_of(cert.terminal_wealth.begin(), cert.terminal_wealth.end(), [](const Rational& x) { return x >= 0; });
}

}  // namespace freelunch
