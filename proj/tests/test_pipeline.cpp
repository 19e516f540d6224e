#include <doctest.h>

#include <random>

#include "coherent/errors.hpp"
#include "coherent/pipeline.hpp"
#include "support/oracles.hpp"

using namespace coherent;
using oracle::q;

TEST_CASE("extremal chains pass") {
    for (long n = 2; n <= 4; ++n) {
        for (const auto& d : {q(2, 3), q(3, 4), q(4, 5)}) {
            const auto r = run_pipeline(n, d, 6);
            CAPTURE(n);
            CAPTURE(to_string(d));
            CHECK(r.passed());
            CHECK(r.failing_stage().empty());
            REQUIRE(r.phi);
            CHECK(*r.phi == (1 - d) / d);
            CHECK(r.pair_gap == r.tail_on_A);
            CHECK(r.reduced_gap >= r.pair_gap);
            CHECK(r.tail == bound_formula(n, d));
            CHECK_FALSE(r.symmetrized);
        }
    }
}

TEST_CASE("worked extremal examples") {
    auto r = run_pipeline(2, q(2, 3), 6);
    CHECK(*r.phi == q(1, 2));
    CHECK(r.tree_ratio->lower == q(1, 2));
    CHECK(r.forest->defect == 0);
    r = run_pipeline(3, q(4, 5), 6);
    CHECK(*r.phi == q(1, 4));
    CHECK(r.passed());
}

TEST_CASE("effective threshold above delta") {
    const auto r = run_pipeline(5, q(3, 5), 6);
    CHECK(r.passed());
    CHECK(*r.phi == q(1, 3));
    CHECK(r.tail == 1);
}

TEST_CASE("threshold one") {
    const auto r = run_pipeline(2, q(1), 6);
    CHECK(r.passed());
    CHECK(r.degenerate);
    CHECK(r.tail == 0);
    CHECK(r.pair_gap == 0);
    CHECK(*r.phi == 0);
}

TEST_CASE("user models are symmetrized when outside C prime") {
    CoherentModel m(FiniteSpace({q(1, 4), q(1, 4), q(1, 2)}), {0, 1},
                    {Partition({{0}, {1, 2}}, 3), Partition::trivial(3)});
    const auto r = run_pipeline(m, q(3, 5), 4);
    CHECK(r.symmetrized);
    CHECK(r.symmetry->passed());
    CHECK(r.passed());
    CHECK(2 * r.tail_on_A == r.tail);
}

TEST_CASE("random user models") {
    std::mt19937_64 rng(83);
    for (int t = 0; t < 60; ++t) {
        const auto m = oracle::random_model(rng, 2 + t % 3, 2 + t % 5);
        const auto r = run_pipeline(m, q(3, 4), 5);
        CHECK(r.passed());
        if (r.phi) CHECK(*r.phi <= q(1, 3));
    }
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(run_pipeline(2, q(2, 3), 0), InvalidParameter);
    CHECK_THROWS_AS(run_pipeline(1, q(2, 3), 3), InvalidParameter);
    CHECK_THROWS_AS(run_pipeline(2, q(1, 3), 3), InvalidParameter);
    CoherentModel single(FiniteSpace({q(1)}), {0}, {Partition::trivial(1)});
    CHECK_THROWS_AS(run_pipeline(single, q(3, 4), 3), InvalidParameter);
}
