#include "freelunch/errors.hpp"
#include "freelunch/market.hpp"
#include "freelunch/scenario.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace freelunch;
using namespace fltest;

namespace {

bool mentions(const std::vector<std::string>& issues, const std::string& what) {
    return std::any_of(issues.begin(), issues.end(),
                       [&](const std::string& s) { return s.find(what) != std::string::npos; });
}

Market two_asset_market() {
    Market m = binomial(1, 2, Rational(1, 2));
    m.asset_ids = {"A", "B"};
    m.prices.push_back({vec_int({3, 3}), vec_int({1, 5})});
    m.index_system = {IndexSet::of({0}), IndexSet::of({1}), IndexSet::of({0, 1})};
    m.trading = {m.grand, m.grand, m.grand};
    return m;
}

Strategy random_strategy(const Market& m, Rng& rng) {
    Strategy s;
    const int k = rng.uniform(0, static_cast<int>(m.index_system.size()) - 1);
    s.index_set = m.index_system[static_cast<std::size_t>(k)];
    for (int t = 0; t <= m.n(); ++t)
        if (rng.chance(1, 2) || s.dates.empty()) s.dates.push_back(t);
    if (s.dates.size() == 1) s.dates.push_back(m.n() > s.dates[0] ? m.n() : s.dates[0]);
    if (s.dates[0] == s.dates[1]) s.dates = {0, m.n()};
    for (std::size_t i = 0; i + 1 < s.dates.size(); ++i) {
        const auto& p = m.trading_at(k, s.dates[i]);
        std::vector<Vec> h;
        for (int a = 0; a < s.index_set.size(); ++a) {
            Vec v(static_cast<std::size_t>(m.num_states()));
            for (const auto& atom : p.atoms()) {
                const Rational x(rng.uniform(-4, 4), rng.uniform(1, 3));
                for (int w : atom) v[static_cast<std::size_t>(w)] = x;
            }
            h.push_back(std::move(v));
        }
        s.holdings.push_back(std::move(h));
    }
    return s;
}

std::vector<Vec> generator_values(const std::vector<GainGenerator>& gens) {
    std::vector<Vec> rows;
    for (const auto& g : gens) rows.push_back(g.values);
    return rows;
}

}  // namespace

TEST_SUITE("market") {

TEST_CASE("binomial is valid") {
    CHECK(validate_market(binomial(4, 8, 2)).empty());
    CHECK(validate_market(two_asset_market()).empty());
}

TEST_CASE("refining property") {
    Market m = two_asset_market();
    m.index_system.pop_back();
    m.trading.pop_back();
    const auto issues = validate_market(m);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0] == "refining property violated: union {A,B} of {A} and {B} is not in the index system");
}

TEST_CASE("monotonicity property") {
    Market m = two_asset_market();
    m.trading[2] = Filtration::constant(Partition::trivial(2), 1);
    CHECK(mentions(validate_market(m), "monotonicity property"));
}

TEST_CASE("adaptedness and containment") {
    Market m = binomial(4, 8, 2);
    m.prices[0][0] = vec_int({4, 5});
    CHECK(mentions(validate_market(m), "not adapted"));

    m = binomial(4, 8, 2);
    m.trading[0] = Filtration({Partition::discrete(2), Partition::discrete(2)});
    CHECK(mentions(validate_market(m), "not contained in grand filtration"));

    m = binomial(4, 8, 2);
    m.space.probability[0] = Rational(2, 5);
    CHECK(mentions(validate_market(m), "measure not normalized"));
}

TEST_CASE("wealth of buy and hold") {
    const Market m = binomial(4, 8, 2);
    const Strategy s{IndexSet::singleton(0), {0, 1}, {{vec_int({1, 1})}}};
    const auto w = wealth_process(m, s);
    CHECK(w[0] == vec_int({0, 0}));
    CHECK(w[1] == vec_int({4, -2}));

    const Strategy zero{IndexSet::singleton(0), {0, 1}, {{vec_int({0, 0})}}};
    for (const auto& row : wealth_process(m, zero)) CHECK(row == vec_int({0, 0}));
}

TEST_CASE("telescoping holdings") {
    Rng rng(21);
    for (int i = 0; i < 50; ++i) {
        ScenarioConfig cfg;
        cfg.n = 3;
        cfg.n_ext = 3;
        const Market m = gen_random_market(cfg, rng);
        const int k = 0;
        const auto& p = m.trading_at(k, 0);
        std::vector<Vec> h;
        for (int a = 0; a < m.index_system[0].size(); ++a) {
            Vec v(static_cast<std::size_t>(m.num_states()));
            for (const auto& atom : p.atoms()) {
                const Rational x = rng.uniform(-3, 3);
                for (int w : atom) v[static_cast<std::size_t>(w)] = x;
            }
            h.push_back(v);
        }
        const Strategy one{m.index_system[0], {0, 3}, {h}};
        const Strategy two{m.index_system[0], {0, 1, 3}, {h, h}};
        CHECK(wealth_process(m, one).back() == wealth_process(m, two).back());
    }
}

TEST_CASE("strategy admissibility") {
    const Market m = binomial(4, 8, 2);
    CHECK_THROWS_AS(wealth_process(m, Strategy{IndexSet::singleton(0), {0, 1}, {{vec_int({1, 0})}}}), InvalidInput);
    CHECK_THROWS_AS(wealth_process(m, Strategy{IndexSet::singleton(0), {0, 2}, {{vec_int({1, 1})}}}), InvalidInput);
    CHECK_THROWS_AS(wealth_process(m, Strategy{IndexSet::singleton(1), {0, 1}, {{vec_int({1, 1})}}}), InvalidInput);
    CHECK_THROWS_AS(wealth_process(m, Strategy{IndexSet::singleton(0), {1, 0}, {{vec_int({1, 1})}}}), InvalidInput);
}

TEST_CASE("generators of a binomial") {
    const auto gens = gain_generators(binomial(4, 8, 2));
    REQUIRE(gens.size() == 1);
    CHECK(gens[0].values == vec_int({4, -2}));
}

TEST_CASE("insider generators follow the lookahead atoms") {
    const auto sc = gen_insider_market(2, 1);
    const auto& m = sc.market;
    const auto gens = gain_generators(m);
    // t = 0 has one atom, t = 1 sees W_2, so four atoms: 1 + 4 generators
    CHECK(gens.size() == 5);
    for (const auto& g : gens) {
        const auto& p = m.trading_at(g.index_set_pos, g.time);
        const auto& atom = p.atom(g.atom);
        for (int w = 0; w < m.num_states(); ++w) {
            const bool inside = std::find(atom.begin(), atom.end(), w) != atom.end();
            const Rational step = m.price(0, g.time + 1)[static_cast<std::size_t>(w)] -
                                  m.price(0, g.time)[static_cast<std::size_t>(w)];
            CHECK(g.values[static_cast<std::size_t>(w)] == (inside ? step : Rational(0)));
        }
    }
}

TEST_CASE("terminal wealth lies in the generator span") {
    Rng rng(22);
    for (int i = 0; i < 120; ++i) {
        const auto cfg = random_config(rng, 8, 3, 1, 3, 4);
        const Market m = gen_random_market(cfg, rng);
        REQUIRE(validate_market(m).empty());
        const auto rows = generator_values(gain_generators(m));
        for (int j = 0; j < 3; ++j) {
            const auto s = random_strategy(m, rng);
            CHECK(in_span(rows, wealth_process(m, s).back()));
        }
    }
}

TEST_CASE("generators are measurable at their right endpoint") {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = random_config(rng, 8, 3, 1, 3, 4);
        const Market m = gen_random_market(cfg, rng);
        for (const auto& g : gain_generators(m)) CHECK(m.grand.at(g.time + 1).measurable(g.values));
    }
}

TEST_CASE("adding a union never shrinks the span") {
    Rng rng(24);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = random_config(rng, 8, 3, 0, 3, 4);
        const Market m = gen_random_market(cfg, rng);
        if (m.index_system.size() < 2) continue;
        // drop the largest set; generators do not require a valid index system
        Market smaller = m;
        const auto top = std::max_element(m.index_system.begin(), m.index_system.end(),
                                          [](IndexSet a, IndexSet b) { return a.size() < b.size(); });
        const auto pos = top - m.index_system.begin();
        smaller.index_system.erase(smaller.index_system.begin() + pos);
        smaller.trading.erase(smaller.trading.begin() + pos);
        const auto base = generator_values(gain_generators(smaller));
        const auto extended = generator_values(gain_generators(m));
        CHECK(rank(extended) >= rank(base));
        for (const auto& v : base) CHECK(in_span(extended, v));
    }
}

}
