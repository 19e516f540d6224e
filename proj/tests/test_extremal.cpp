#include <doctest.h>

#include <set>

#include "coherent/errors.hpp"
#include "coherent/extremal.hpp"
#include "support/oracles.hpp"

using namespace coherent;
using oracle::q;

namespace {

const std::vector<Rational> thresholds{q(51, 100), q(3, 5), q(2, 3), q(7, 10),
                                       q(3, 4),   q(4, 5), q(9, 10), q(1)};

}  // namespace

TEST_CASE("masses for (2, 3/4)") {
    const auto m = build_extremal(2, q(3, 4));
    const auto s = extremal_spec(2, q(3, 4));
    CHECK(m.atoms() == 6);
    CHECK(m.space().mass(s.a(0)) == q(3, 10));
    CHECK(m.space().mass(s.b(0)) == q(3, 10));
    for (long i = 1; i <= 2; ++i) {
        CHECK(m.space().mass(s.a(i)) == q(1, 10));
        CHECK(m.space().mass(s.b(i)) == q(1, 10));
    }
    CHECK(tail_prob(m, q(3, 4)) == q(2, 5));
}

TEST_CASE("masses for (3, 4/5)") {
    const auto s = extremal_spec(3, q(4, 5));
    CHECK(s.core_mass == q(1, 4));
    CHECK(s.side_mass == q(1, 12));
    CHECK(tail_prob(build_extremal(3, q(4, 5)), q(4, 5)) == q(1, 2));
}

TEST_CASE("boundary case (4, 2/3)") {
    const auto s = extremal_spec(4, q(2, 3));
    CHECK(s.delta_eff == q(2, 3));
    CHECK(s.core_mass == 0);
    CHECK(s.side_mass == q(1, 8));
    CHECK(tail_prob(build_extremal(4, q(2, 3)), q(2, 3)) == 1);
}

TEST_CASE("effective threshold above the formula's range") {
    const auto s = extremal_spec(5, q(3, 5));
    CHECK(s.delta_eff == q(3, 4));
    CHECK(s.core_mass == 0);
    const auto m = build_extremal(5, q(3, 5));
    CHECK(tail_prob(m, q(3, 5)) == 1);
}

TEST_CASE("certificates") {
    auto c = certify_extremal(2, q(3, 4));
    CHECK(c.attained);
    CHECK(c.tail == q(2, 5));
    c = certify_extremal(6, q(9, 10));
    CHECK(c.attained);
    CHECK(c.tail == q(6, 11));
    c = certify_extremal(2, q(1));
    CHECK(c.attained);
    CHECK(c.tail == 0);
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(build_extremal(1, q(3, 4)), InvalidParameter);
    CHECK_THROWS_AS(build_extremal(2, q(1, 3)), InvalidParameter);
    CHECK_THROWS_AS(build_extremal(2, q(1, 2)), InvalidParameter);
    CHECK_THROWS_AS(build_extremal(2, q(5, 4)), InvalidParameter);
}

TEST_CASE("attainment, opinion table and gaps over the grid") {
    for (long n = 2; n <= 6; ++n) {
        for (const auto& d : thresholds) {
            CAPTURE(n);
            CAPTURE(to_string(d));
            const auto s = extremal_spec(n, d);
            const auto m = build_extremal(n, d);
            CHECK(m.atoms() == static_cast<std::size_t>(2 * n + 2));
            CHECK(m.agents() == static_cast<std::size_t>(n));
            CHECK(tail_prob(m, d) == bound_formula(n, d));
            CHECK(oracle::tail(m, d) == bound_formula(n, d));
            CHECK(m.space().mass_of(m.event()) == q(1, 2));

            const std::set<Rational> allowed{q(1), q(0), s.delta_eff, 1 - s.delta_eff};
            for (const auto& row : m.opinions()) {
                for (const auto& v : row) CHECK(allowed.count(v) == 1);
            }
            const auto g = max_gap(m);
            CHECK(g[s.a(0)] == 0);
            CHECK(g[s.b(0)] == 0);
            for (long k = 1; k <= n; ++k) {
                CHECK(g[s.a(k)] >= s.delta_eff);
                CHECK(g[s.b(k)] >= s.delta_eff);
            }
            CHECK(check_cprime(m).passed());
        }
    }
}
