#include "freelunch/errors.hpp"
#include "freelunch/probability.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace freelunch;
using namespace fltest;

TEST_SUITE("probability") {

TEST_CASE("space validation") {
    FiniteSpace s{{"a", "b"}, {Rational(1, 2), Rational(1, 2)}, 1, 2};
    CHECK(validate_space(s).empty());

    s.probability = {Rational(1, 2), Rational(2, 5)};
    const auto issues = validate_space(s);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0] == "measure not normalized (total mass 9/10)");

    s.probability = {Rational(3, 2), Rational(-1, 2)};
    CHECK(validate_space(s).size() == 1);

    s = FiniteSpace{{"a", "a"}, {Rational(1, 2), Rational(1, 2)}, 0, 0};
    CHECK(validate_space(s).size() == 2);
}

TEST_CASE("partitions are canonical") {
    const auto p = part(4, {{3, 2}, {1}, {0}});
    CHECK(p.atoms() == std::vector<std::vector<int>>{{0}, {1}, {2, 3}});
    CHECK(p == Partition::from_labels({7, 5, 1, 1}));
    CHECK(p.atom_of(3) == 2);
    CHECK_THROWS_AS(part(3, {{0, 1}, {1, 2}}), InvalidInput);
    CHECK_THROWS_AS(part(3, {{0, 1}}), InvalidInput);
    CHECK_THROWS_AS(part(3, {{0, 1, 2}, {}}), InvalidInput);
}

TEST_CASE("refines") {
    CHECK(refines(part(4, {{0}, {1}, {2, 3}}), part(4, {{0, 1}, {2, 3}})));
    const auto p = part(4, {{0, 2}, {1, 3}});
    CHECK(refines(p, p));
    CHECK_FALSE(refines(part(4, {{0, 1}, {2, 3}}), part(4, {{0, 2}, {1, 3}})));
    CHECK_THROWS_AS(refines(Partition::trivial(3), Partition::trivial(4)), InvalidInput);
}

TEST_CASE("sigma_join") {
    const auto a = part(4, {{0, 1}, {2, 3}});
    const auto b = part(4, {{0, 2}, {1, 3}});
    CHECK(sigma_join(a, b) == Partition::discrete(4));
    CHECK(sigma_join(std::vector<Partition>{a}) == a);
    CHECK(sigma_join(a, Partition::trivial(4)) == a);
    CHECK_THROWS_AS(sigma_join(std::vector<Partition>{}), InvalidInput);
    CHECK_THROWS_AS(sigma_join(a, Partition::trivial(3)), InvalidInput);
}

TEST_CASE("sigma_meet") {
    const auto a = part(4, {{0, 1}, {2}, {3}});
    const auto b = part(4, {{0}, {1, 2}, {3}});
    CHECK(sigma_meet(a, b) == part(4, {{0, 1, 2}, {3}}));
    CHECK(sigma_meet(a, Partition::discrete(4)) == a);
}

TEST_CASE("conditional expectation") {
    const Vec x = vec_int({4, 0, 2, 6});
    const Vec uniform(4, Rational(1, 4));
    const auto halves = part(4, {{0, 1}, {2, 3}});
    CHECK(conditional_expectation(x, halves, uniform) == vec_int({2, 2, 4, 4}));
    CHECK(conditional_expectation(x, Partition::discrete(4), uniform) == x);
    const Vec q = {Rational(1, 2), Rational(1, 6), Rational(1, 6), Rational(1, 6)};
    CHECK(conditional_expectation(x, halves, q) == vec_int({3, 3, 4, 4}));
}

TEST_CASE("stopped sigma-field") {
    const Filtration f({Partition::trivial(4), part(4, {{0, 1}, {2, 3}}), Partition::discrete(4)});
    CHECK(stopped_sigma_field(f, {1, 1, 2, 2}) == part(4, {{0, 1}, {2}, {3}}));
    CHECK(brute_stopped_sigma_field(f, {1, 1, 2, 2}, 2) == part(4, {{0, 1}, {2}, {3}}));
    CHECK(stopped_sigma_field(f, {1, 1, 1, 1}) == f.at(1));
    CHECK(stopped_sigma_field(f, {0, 0, 0, 0}) == f.at(0));
    CHECK_THROWS_AS(stopped_sigma_field(f, {0, 1, 1, 1}), PreconditionError);
    CHECK_FALSE(is_stopping_time(f, {2, 2, 1, 2}));
}

TEST_CASE("stopping process validation") {
    const int n = 3;
    const auto info = Filtration::constant(Partition::trivial(2), n);
    StoppingProcess zero{{{0, 0}, {1, 1}, {2, 2}, {3, 3}}, info};
    CHECK(validate_stopping_process(zero, DelayMode::information, n).empty());

    StoppingProcess lagged{{{0, 0}, {0, 0}, {1, 1}, {2, 2}}, info};
    CHECK(validate_stopping_process(lagged, DelayMode::information, n).empty());

    StoppingProcess early{{{0, 0}, {0, 0}, {1, 1}, {2, 2}}, info};
    const auto issues = validate_stopping_process(early, DelayMode::execution, n);
    REQUIRE_FALSE(issues.empty());
    CHECK(issues.front().find("t <= pi(t)") != std::string::npos);

    StoppingProcess peeking{{{0, 0}, {0, 1}, {2, 2}, {3, 3}}, info};
    CHECK(validate_stopping_process(peeking, DelayMode::information, n).size() == 1);

    StoppingProcess shrinking{{{0, 0}, {1, 1}, {0, 0}, {3, 3}}, info};
    CHECK(validate_stopping_process(shrinking, DelayMode::information, n).size() == 1);

    CHECK(is_discrete_continuous(StoppingProcess{{{1, 0}, {1, 1}, {2, 2}}, info}));
    CHECK_FALSE(is_discrete_continuous(StoppingProcess{{{0, 0}, {2, 1}, {2, 2}}, info}));
}

TEST_CASE("join laws on random partitions") {
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        const int n = rng.uniform(1, 7);
        const auto a = gen_partition(n, rng);
        const auto b = gen_partition(n, rng);
        const auto c = gen_partition(n, rng);
        CHECK(sigma_join(a, a) == a);
        CHECK(sigma_join(a, b) == sigma_join(b, a));
        CHECK(sigma_join(sigma_join(a, b), c) == sigma_join(a, sigma_join(b, c)));
        CHECK(sigma_join(a, Partition::trivial(n)) == a);
        CHECK(refines(sigma_join(a, b), a));
        CHECK(refines(a, sigma_meet(a, b)));
        CHECK(refines(b, sigma_meet(a, b)));
    }
}

TEST_CASE("refines is a partial order") {
    Rng rng(12);
    for (int i = 0; i < 300; ++i) {
        const int n = rng.uniform(1, 6);
        const auto a = gen_partition(n, rng);
        const auto b = gen_refinement(a, rng);
        const auto c = gen_refinement(b, rng);
        CHECK(refines(a, a));
        CHECK(refines(c, a));
        const auto d = gen_partition(n, rng);
        if (refines(a, d) && refines(d, a)) CHECK(a == d);
    }
}

TEST_CASE("conditional expectation is a projection with the tower property") {
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        const int n = rng.uniform(1, 8);
        const auto q = gen_measure(n, rng);
        const auto x = gen_vec(n, -5, 9, rng);
        const auto coarse = gen_partition(n, rng);
        const auto fine = gen_refinement(coarse, rng);
        const auto y = conditional_expectation(x, fine, q);
        CHECK(fine.measurable(y));
        CHECK(conditional_expectation(y, fine, q) == y);
        CHECK(conditional_expectation(y, coarse, q) == conditional_expectation(x, coarse, q));
    }
}

TEST_CASE("stopped sigma-fields follow the order of stopping times") {
    Rng rng(14);
    for (int i = 0; i < 200; ++i) {
        const int n = rng.uniform(1, 6);
        const int last = rng.uniform(1, 3);
        const auto f = gen_filtration(n, last, rng);
        const int t = rng.uniform(0, last);
        CHECK(stopped_sigma_field(f, std::vector<int>(static_cast<std::size_t>(n), t)) == f.at(t));

        // tau <= tau' built from f-measurable events
        std::vector<int> tau(static_cast<std::size_t>(n), last), later(static_cast<std::size_t>(n), last);
        for (int s = last - 1; s >= 0; --s)
            for (const auto& atom : f.at(s).atoms())
                if (rng.chance(1, 3))
                    for (int w : atom) tau[static_cast<std::size_t>(w)] = s;
        for (int w = 0; w < n; ++w) later[static_cast<std::size_t>(w)] = tau[static_cast<std::size_t>(w)];
        for (int s = last - 1; s >= 0; --s)
            for (const auto& atom : f.at(s).atoms()) {
                bool all_at_s = true;
                for (int w : atom) all_at_s = all_at_s && tau[static_cast<std::size_t>(w)] == s;
                if (all_at_s && rng.chance(1, 2))
                    for (int w : atom) later[static_cast<std::size_t>(w)] = s + 1;
            }
        REQUIRE(is_stopping_time(f, tau));
        if (!is_stopping_time(f, later)) continue;
        CHECK(refines(stopped_sigma_field(f, later), stopped_sigma_field(f, tau)));
    }
}

TEST_CASE("stopped sigma-field matches the definition exhaustively") {
    Rng rng(15);
    int checked = 0;
    for (int i = 0; i < 12; ++i) {
        const int n = rng.uniform(1, 6);
        const int last = rng.uniform(1, 3);
        const auto f = gen_filtration(n, last, rng);
        std::vector<int> tau(static_cast<std::size_t>(n), 0);
        for (;;) {
            if (is_stopping_time(f, tau)) {
                CHECK(stopped_sigma_field(f, tau) == brute_stopped_sigma_field(f, tau, last));
                ++checked;
            }
            std::size_t k = 0;
            while (k < tau.size() && tau[k] == last) tau[k++] = 0;
            if (k == tau.size()) break;
            ++tau[k];
        }
    }
    CHECK(checked > 100);
}

}
