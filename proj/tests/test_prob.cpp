#include <doctest.h>

#include <random>
#include <set>

#include "coherent/errors.hpp"
#include "coherent/extremal.hpp"
#include "coherent/prob.hpp"
#include "support/oracles.hpp"

using namespace coherent;
using oracle::q;

namespace {

CoherentModel two_atoms(std::vector<Partition> parts) {
    return CoherentModel(FiniteSpace({q(1, 2), q(1, 2)}), {0}, std::move(parts));
}

CoherentModel constant_model(long n) {
    std::vector<Partition> parts(n, Partition::trivial(4));
    return CoherentModel(FiniteSpace({q(1, 4), q(1, 4), q(1, 4), q(1, 4)}), {0, 2}, parts);
}

}  // namespace

TEST_CASE("space and partition validation") {
    CHECK_THROWS_AS(FiniteSpace({q(1, 2), q(1, 3)}), InvalidParameter);
    CHECK_THROWS_AS(FiniteSpace({q(3, 2), q(-1, 2)}), InvalidParameter);
    CHECK_THROWS_AS(Partition({{0}, {0, 1}}, 2), InvalidParameter);
    CHECK_THROWS_AS(Partition({{0}}, 2), InvalidParameter);
    CHECK_THROWS_AS(Partition({{0}, {}, {1}}, 2), InvalidParameter);
    CHECK_THROWS_AS(Partition({{0, 2}}, 2), InvalidParameter);
    CHECK_THROWS_AS(CoherentModel(FiniteSpace({q(1)}), {0, 0}, {Partition::trivial(1)}), InvalidParameter);
    CHECK_THROWS_AS(CoherentModel(FiniteSpace({q(1)}), {1}, {Partition::trivial(1)}), InvalidParameter);
    CHECK_THROWS_AS(CoherentModel(FiniteSpace({q(1)}), {0}, {Partition::trivial(2)}), InvalidParameter);
}

TEST_CASE("condexp on trivial and discrete partitions") {
    FiniteSpace space({q(1, 2), q(1, 2)});
    CHECK(condexp(space, {0}, Partition::trivial(2)) == std::vector<Rational>{q(1, 2), q(1, 2)});
    CHECK(condexp(space, {0}, Partition::discrete(2)) == std::vector<Rational>{q(1), q(0)});
}

TEST_CASE("zero mass blocks") {
    FiniteSpace space({q(0), q(1, 2), q(1, 2), q(0)});
    Partition p({{0}, {1, 2}, {3}}, 4);
    const auto x = condexp(space, {0, 1}, p);
    CHECK(x[0] == 1);
    CHECK(x[1] == q(1, 2));
    CHECK(x[3] == 0);
    Partition mixed({{0, 3}, {1, 2}}, 4);
    CHECK(condexp(space, {0, 1}, mixed)[0] == q(1, 2));
}

TEST_CASE("extremal(2, 2/3) opinions of the first agent") {
    const auto m = build_extremal(2, q(2, 3));
    const auto s = extremal_spec(2, q(2, 3));
    const auto& x = m.opinions()[0];
    CHECK(x[s.a(1)] == 1);
    CHECK(x[s.b(1)] == 0);
    CHECK(x[s.a(0)] == q(2, 3));
    CHECK(x[s.b(2)] == q(2, 3));
    CHECK(x[s.b(0)] == q(1, 3));
    CHECK(x[s.a(2)] == q(1, 3));
}

TEST_CASE("opinions match the block-scan oracle") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        const auto m = oracle::random_model(rng, 1 + t % 4, 1 + t % 7);
        CHECK(opinions(m) == oracle::opinions(m));
    }
}

TEST_CASE("constant model") {
    const auto m = constant_model(3);
    for (const auto& row : m.opinions()) {
        for (const auto& v : row) CHECK(v == q(1, 2));
    }
    for (const auto& g : max_gap(m)) CHECK(g == 0);
    CHECK(tail_prob(m, q(3, 4)) == 0);
    CHECK(tail_prob_on_A(m, q(3, 4)) == 0);
    CHECK(expected_max_gap(m) == 0);
}

TEST_CASE("single atom space") {
    CoherentModel in(FiniteSpace({q(1)}), {0}, {Partition::trivial(1), Partition::trivial(1)});
    CHECK(in.opinions() == OpinionMatrix{{q(1)}, {q(1)}});
    CoherentModel out(FiniteSpace({q(1)}), {}, {Partition::trivial(1)});
    CHECK(out.opinions() == OpinionMatrix{{q(0)}});
}

TEST_CASE("max gap and tail") {
    const auto m = two_atoms({Partition::discrete(2), Partition({{0, 1}}, 2)});
    CHECK(max_gap(m) == std::vector<Rational>{q(1, 2), q(1, 2)});
    const auto opposite = CoherentModel(FiniteSpace({q(1, 2), q(1, 2)}), {0},
                                        {Partition::discrete(2), Partition::discrete(2)});
    CHECK(max_gap(opposite)[0] == 0);

    const auto e = build_extremal(2, q(2, 3));
    const auto s = extremal_spec(2, q(2, 3));
    const auto g = max_gap(e);
    CHECK(g[s.a(0)] == 0);
    CHECK(g[s.b(0)] == 0);
    for (long i = 1; i <= 2; ++i) {
        CHECK(g[s.a(i)] == q(2, 3));
        CHECK(g[s.b(i)] == q(2, 3));
    }
    CHECK(tail_prob(build_extremal(2, q(3, 4)), q(3, 4)) == q(2, 5));
    CHECK(tail_prob(build_extremal(3, q(4, 5)), q(4, 5)) == q(1, 2));
    CHECK(tail_prob_on_A(e, q(2, 3)) == q(1, 4));
    CHECK(expected_max_gap(e) == q(1, 3));
}

TEST_CASE("expected gap of discrete against trivial") {
    CoherentModel m(FiniteSpace({q(1, 2), q(1, 2)}), {0}, {Partition::discrete(2), Partition::trivial(2)});
    CHECK(expected_max_gap(m) == q(1, 2));
}

TEST_CASE("empty event") {
    CoherentModel m(FiniteSpace({q(1, 3), q(2, 3)}), {}, {Partition::discrete(2), Partition::trivial(2)});
    CHECK(tail_prob_on_A(m, q(3, 4)) == 0);
    CHECK(tail_prob(m, q(3, 4)) == 0);
}

TEST_CASE("tail probability range checks") {
    const auto m = constant_model(2);
    CHECK_THROWS_AS(tail_prob(m, q(1, 2)), InvalidParameter);
    CHECK_THROWS_AS(tail_prob(m, q(11, 10)), InvalidParameter);
    CHECK_NOTHROW(tail_prob(m, q(1)));
    CHECK_THROWS_AS(bound_formula(1, q(3, 4)), InvalidParameter);
    CHECK_THROWS_AS(bound_formula(2, q(1, 3)), InvalidParameter);
}

TEST_CASE("bound formula") {
    CHECK(bound_formula(2, q(3, 4)) == q(2, 5));
    CHECK(bound_formula(3, q(4, 5)) == q(1, 2));
    CHECK(bound_formula(5, q(3, 5)) == 1);
    CHECK(bound_formula(6, q(9, 10)) == q(6, 11));
    CHECK(bound_formula(4, q(1)) == 0);
}

TEST_CASE("random models against oracles") {
    std::mt19937_64 rng(5);
    const std::vector<Rational> deltas{q(51, 100), q(2, 3), q(3, 4), q(1)};
    for (int t = 0; t < 150; ++t) {
        const auto m = oracle::random_model(rng, 2 + t % 3, 2 + t % 6);
        Rational prev = 2;
        for (const auto& d : deltas) {
            const Rational tail = tail_prob(m, d);
            const Rational on_a = tail_prob_on_A(m, d);
            CHECK(tail == oracle::tail(m, d));
            CHECK(on_a == oracle::tail(m, d, true));
            CHECK(on_a <= tail);
            CHECK(tail <= 1);
            CHECK(on_a <= m.space().mass_of(m.event()));
            CHECK(tail <= prev);
            CHECK(tail <= bound_formula(static_cast<long>(m.agents()), d));
            prev = tail;
        }
        CHECK(expected_max_gap(m) == oracle::expected_gap(m));
    }
}

TEST_CASE("conditional identity") {
    const auto e = build_extremal(2, q(2, 3));
    auto r = check_conditional_identity(e, 0, q(2, 3));
    CHECK(r.holds);
    CHECK(r.lhs == q(1, 8));
    CHECK(check_conditional_identity(e, 0, q(1)).holds);
    CHECK(check_conditional_identity(e, 0, q(1)).lhs == 0);
    CHECK(check_conditional_identity(e, 1, q(3, 7)).holds);
    CHECK_THROWS_AS(check_conditional_identity(e, 0, q(0)), InvalidParameter);
    CHECK_THROWS_AS(check_conditional_identity(e, 0, q(3, 2)), InvalidParameter);
    CHECK_THROWS_AS(check_conditional_identity(e, 2, q(1, 2)), InvalidParameter);

    std::mt19937_64 rng(17);
    for (int t = 0; t < 100; ++t) {
        const auto m = oracle::random_model(rng, 2 + t % 2, 1 + t % 6);
        for (std::size_t i = 0; i < m.agents(); ++i) {
            std::set<Rational> levels(m.opinions()[i].begin(), m.opinions()[i].end());
            for (const auto& y : levels) {
                if (y > 0) CHECK(check_conditional_identity(m, i, y).holds);
            }
        }
    }
}

TEST_CASE("C prime membership") {
    const auto third = CoherentModel(FiniteSpace({q(1, 3), q(2, 3)}), {0}, {Partition::discrete(2)});
    const auto r = check_cprime(third);
    CHECK_FALSE(r.half_mass);
    CHECK_FALSE(r.passed());

    const auto e = check_cprime(build_extremal(2, q(2, 3)));
    CHECK(e.half_mass);
    CHECK(e.balanced);
    CHECK(e.failures.empty());

    // P(A) = 1/2 but the levels are unbalanced.
    const auto lopsided = CoherentModel(FiniteSpace({q(1, 4), q(1, 4), q(1, 2)}), {0, 1},
                                        {Partition({{0}, {1, 2}}, 3)});
    const auto l = check_cprime(lopsided);
    CHECK(l.half_mass);
    CHECK_FALSE(l.balanced);
    CHECK_FALSE(l.failures.empty());
}

TEST_CASE("value count") {
    CHECK(value_count(constant_model(2)) == 1);
    CHECK(value_count(build_extremal(2, q(2, 3))) == 4);
}
