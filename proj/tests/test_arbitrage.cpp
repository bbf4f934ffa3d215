#include "freelunch/arbitrage.hpp"
#include "freelunch/delay.hpp"
#include "freelunch/document.hpp"
#include "freelunch/scenario.hpp"
#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace freelunch;
using namespace fltest;

namespace {

Verdict measure_verdict(int horizon, Vec q) {
    Verdict v;
    v.horizon = horizon;
    v.certificate = MartingaleMeasureCertificate{std::move(q)};
    return v;
}

Market random_market(Rng& rng) {
    const auto cfg = random_config(rng, 8, 3, 1, 3, 4);
    if (rng.chance(1, 2)) return gen_martingale_market(cfg, rng).market;
    return gen_random_market(cfg, rng);
}

// Martingale property for every pair t <= u, using conditional expectations only.
bool martingale_all_pairs(const Market& m, const Vec& q, int horizon) {
    for (std::size_t k = 0; k < m.index_system.size(); ++k)
        for (int a : m.index_system[k].members())
            for (int t = 0; t <= horizon; ++t) {
                const auto& f = m.trading_at(static_cast<int>(k), std::min(t, m.trading[k].last_time()));
                const auto now = conditional_expectation(m.price(a, t), f, q);
                for (int u = t; u <= horizon; ++u)
                    if (conditional_expectation(m.price(a, u), f, q) != now) return false;
            }
    return true;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_SUITE("arbitrage") {

TEST_CASE("no-arbitrage binomial") {
    const Market m = binomial(1, 2, Rational(1, 2));
    CHECK_FALSE(find_free_lunch(m));
    const auto q = find_martingale_measure(m);
    REQUIRE(q);
    CHECK(q->q == vec({Rational(1, 3), Rational(2, 3)}));
    const auto v = check_naflp(m);
    CHECK_FALSE(v.free_lunch());
    CHECK(verify_certificate(m, v));
}

TEST_CASE("dominated binomial") {
    const Market m = binomial(1, 2, 1);
    CHECK_FALSE(find_martingale_measure(m));
    const auto lunch = find_free_lunch(m);
    REQUIRE(lunch);
    CHECK(lunch->terminal_wealth == vec_int({1, 0}));
    CHECK(lunch->strategy.dates == std::vector<int>{0, 1});
    CHECK(lunch->strategy.holdings[0][0] == vec_int({1, 1}));
    const auto v = check_naflp(m);
    REQUIRE(v.free_lunch());
    CHECK(verify_certificate(m, v));
}

TEST_CASE("insider market") {
    const auto sc = gen_insider_market(2, 1);
    const auto lunch = find_free_lunch(sc.market);
    REQUIRE(lunch);
    CHECK(lunch->terminal_wealth == Vec(8, Rational(1)));
    const auto w = wealth_process(sc.market, lunch->strategy);
    CHECK(w.back() == lunch->terminal_wealth);
    CHECK(w.front() == Vec(8, Rational(0)));

    const Market delayed = information_delayed_market(sc.market, sc.delay);
    const auto v = check_naflp(delayed);
    REQUIRE_FALSE(v.free_lunch());
    CHECK(verify_certificate(delayed, measure_verdict(delayed.n(), Vec(8, Rational(1, 8)))));
    CHECK(verify_certificate(delayed, v));
}

TEST_CASE("zero lookahead has no free lunch") {
    const auto sc = gen_insider_market(2, 0);
    CHECK_FALSE(check_naflp(sc.market).free_lunch());
    CHECK_FALSE(check_naflp(information_delayed_market(sc.market, sc.delay)).free_lunch());
    const auto ex = gen_insider_execution_market(2, 0);
    CHECK_FALSE(check_naflp(ex.market).free_lunch());
    CHECK_FALSE(check_naflp(delayed_market(ex.market, ex.delay)).free_lunch());
}

TEST_CASE("tampered certificates fail verification") {
    const Market m = binomial(1, 2, Rational(1, 2));
    CHECK_FALSE(verify_certificate(m, measure_verdict(1, vec({Rational(4, 3), Rational(-1, 3)}))));
    CHECK_FALSE(verify_certificate(m, measure_verdict(1, vec({Rational(1, 2), Rational(1, 2)}))));
    CHECK_FALSE(verify_certificate(m, measure_verdict(1, vec({Rational(1, 3), Rational(1, 3)}))));
    CHECK_FALSE(verify_certificate(m, measure_verdict(1, vec({0, 1}))));

    const Market d = binomial(1, 2, 1);
    auto v = check_naflp(d);
    auto lunch = v.lunch();
    lunch.terminal_wealth = vec_int({2, 0});
    v.certificate = lunch;
    CHECK_FALSE(verify_certificate(d, v));

    lunch.strategy.holdings[0][0] = vec_int({-1, -1});
    lunch.terminal_wealth = vec_int({-1, 0});
    v.certificate = lunch;
    CHECK_FALSE(verify_certificate(d, v));

    lunch.strategy.holdings[0][0] = vec_int({0, 0});
    lunch.terminal_wealth = vec_int({0, 0});
    v.certificate = lunch;
    CHECK_FALSE(verify_certificate(d, v));
}

TEST_CASE("exactly one oracle succeeds") {
    Rng rng(51);
    for (int i = 0; i < 200; ++i) {
        const Market m = random_market(rng);
        const auto lunch = find_free_lunch(m);
        const auto q = find_martingale_measure(m);
        CHECK(lunch.has_value() != q.has_value());
        const auto v = check_naflp(m);
        CHECK(v.free_lunch() == lunch.has_value());
        CHECK(verify_certificate(m, v));
        if (v.free_lunch()) {
            CHECK(wealth_process(m, v.lunch().strategy).front() == Vec(static_cast<std::size_t>(m.num_states())));
        } else {
            CHECK(martingale_all_pairs(m, v.measure().q, m.n()));
        }
    }
}

TEST_CASE("extended horizons") {
    Rng rng(52);
    for (int i = 0; i < 60; ++i) {
        auto cfg = random_config(rng, 8, 3, 2, 3, 4);
        const Market m = gen_random_market(cfg, rng);
        for (int h = 0; h <= m.n_ext(); ++h) {
            const auto v = check_naflp(m, h);
            CHECK(v.horizon == h);
            CHECK(verify_certificate(m, v));
        }
    }
}

TEST_CASE("verdict branch is invariant under scaling and reweighting") {
    Rng rng(53);
    for (int i = 0; i < 100; ++i) {
        const Market m = random_market(rng);
        const bool lunch = check_naflp(m).free_lunch();

        Market scaled = m;
        const Rational c(rng.uniform(1, 9), rng.uniform(1, 9));
        for (auto& table : scaled.prices)
            for (auto& row : table)
                for (auto& x : row) x *= c;
        CHECK(check_naflp(scaled).free_lunch() == lunch);

        Market reweighted = m;
        reweighted.space.probability = gen_measure(m.num_states(), rng);
        CHECK(check_naflp(reweighted).free_lunch() == lunch);
    }
}

TEST_CASE("martingale markets verify their constructing measure") {
    Rng rng(54);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = random_config(rng, 8, 3, 2, 3, 4);
        const auto mm = gen_martingale_market(cfg, rng);
        CHECK(verify_certificate(mm.market, measure_verdict(mm.market.n_ext(), mm.q)));
        CHECK_FALSE(check_naflp(mm.market, mm.market.n_ext()).free_lunch());
    }
}

TEST_CASE("golden verdicts") {
    const std::string dir = FREELUNCH_SOURCE_DIR;
    const auto binomial_doc = parse_document(slurp(dir + "/scenarios/binomial.json"));
    CHECK(format_json(verdict_to_json(binomial_doc.market, check_naflp(binomial_doc.market))) ==
          slurp(dir + "/tests/golden/binomial.verdict.json"));
    const auto insider_doc = parse_document(slurp(dir + "/scenarios/insider.json"));
    CHECK(format_json(verdict_to_json(insider_doc.market, check_naflp(insider_doc.market))) ==
          slurp(dir + "/tests/golden/insider.verdict.json"));
    const auto delayed = information_delayed_market(insider_doc.market, *insider_doc.information);
    CHECK(format_json(verdict_to_json(delayed, check_naflp(delayed))) ==
          slurp(dir + "/tests/golden/insider_delayed.verdict.json"));
}

}
