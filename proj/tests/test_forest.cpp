#include <doctest.h>

#include <algorithm>
#include <random>

#include "coherent/errors.hpp"
#include "coherent/extremal.hpp"
#include "coherent/forest.hpp"
#include "coherent/symmetry.hpp"
#include "support/oracles.hpp"

using namespace coherent;
using oracle::q;

namespace {

Rational pow(const Rational& base, int e) {
    Rational out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

std::vector<std::pair<Rational, Rational>> root_intervals(const Forest& f) {
    std::vector<std::pair<Rational, Rational>> out;
    for (auto r : f.roots) out.emplace_back(f.nodes[r].from, f.nodes[r].to);
    return out;
}

// Independent disjointness check: sort all node intervals and compare
// neighbours.
bool pairwise_disjoint(const Forest& f) {
    std::vector<std::pair<Rational, Rational>> iv;
    for (const auto& n : f.nodes) iv.emplace_back(n.from, n.to);
    std::sort(iv.begin(), iv.end());
    for (std::size_t i = 1; i < iv.size(); ++i) {
        if (iv[i].first < iv[i - 1].second) return false;
    }
    return true;
}

Forest extremal_forest(int depth) {
    const auto pair = model_to_step_pair(build_extremal(2, q(2, 3)), q(2, 3));
    return build_forest(pair, q(2, 3), depth);
}

}  // namespace

TEST_CASE("roots of the worked example") {
    const auto f = build_forest(oracle::worked_example_pair(), q(7, 10), 12);
    const std::vector<std::pair<Rational, Rational>> expected{
        {q(3), q(5)}, {q(5), q(8)}, {q(8), q(12)}, {q(12), q(15)}};
    CHECK(root_intervals(f) == expected);
}

TEST_CASE("first generation of the worked example") {
    const auto f = build_forest(oracle::worked_example_pair(), q(7, 10), 12);
    const auto& second_root = f.nodes[f.roots[1]];
    REQUIRE(second_root.children.size() == 1);
    const auto& child = f.nodes[second_root.children[0]];
    CHECK(child.from == 1);
    CHECK(child.to == 2);
    CHECK(child.high == 1);
    CHECK(child.children.empty());

    const auto& first_root = f.nodes[f.roots[0]];
    REQUIRE(first_root.children.size() == 1);
    CHECK(f.nodes[first_root.children[0]].from == 0);
    CHECK(f.nodes[first_root.children[0]].to == q(2, 7));
}

TEST_CASE("worked example at depth 12") {
    const auto f = build_forest(oracle::worked_example_pair(), q(7, 10), 12);
    const auto r = verify_forest(f);
    CHECK(r.passed());
    CHECK(r.failures.empty());
    CHECK(r.high_measure == 15);
    CHECK(r.defect >= 0);
    CHECK(r.defect <= 15 * pow(q(3, 7), 11));
    CHECK(r.defect <= r.residual_bound);
    CHECK(r.materialized + r.defect == 15);
    CHECK(pairwise_disjoint(f));
    for (const auto& n : f.nodes) {
        if (n.depth == 12) CHECK_FALSE(n.expanded);
        if (n.high == 1) CHECK(n.children.empty());
    }
}

TEST_CASE("tree masses approach the geometric limits") {
    const int depth = 20;
    const auto f = build_forest(oracle::worked_example_pair(), q(7, 10), depth);
    const auto trees = tree_masses(f);
    REQUIRE(trees.size() == 4);
    const std::vector<Rational> limits{q(1, 3), q(1), q(2, 3), q(1)};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(trees[i].descendants <= limits[i]);
        CHECK(limits[i] <= trees[i].descendants + trees[i].residual);
    }
    CHECK(trees[1].descendants == 1);
    CHECK(trees[3].descendants == 1);
    // [3,5) has descendants 2/7 (1 + 1/7 + ... + 1/7^(d-2)).
    Rational partial = 0;
    for (int k = 0; k <= depth - 2; ++k) partial += q(2, 7) * pow(q(1, 7), k);
    CHECK(trees[0].descendants == partial);

    const auto ratio = best_tree_ratio(f);
    CHECK(ratio.lower == q(1, 3));
    CHECK(ratio.upper >= q(1, 3));
    CHECK(ratio.lower <= q(3, 7));
}

TEST_CASE("shallow forest keeps the residual bound") {
    const auto f = build_forest(oracle::worked_example_pair(), q(7, 10), 1);
    CHECK(f.nodes.size() == 4);
    CHECK(f.residual_bound == 9);
    const auto r = verify_forest(f);
    CHECK(r.passed());
    CHECK(r.defect == 3);
}

TEST_CASE("extremal(2, 2/3) forest") {
    const auto f = extremal_forest(3);
    Rational roots = 0;
    for (auto r : f.roots) {
        roots += f.nodes[r].length();
        CHECK(f.nodes[r].high == q(2, 3));
    }
    CHECK(roots == q(1, 2));
    Rational children = 0;
    for (const auto& n : f.nodes) {
        if (n.parent != ForestNode::no_parent) {
            children += n.length();
            CHECK(n.high == 1);
            CHECK(n.depth == 2);
        }
    }
    CHECK(children == q(1, 4));
    CHECK(f.residual_bound == 0);
    const auto r = verify_forest(f);
    CHECK(r.passed());
    CHECK(r.defect == 0);
    CHECK(r.materialized == q(3, 4));

    const auto trees = tree_masses(f);
    REQUIRE(trees.size() == 2);
    CHECK(trees[0].descendants == q(1, 8));
    CHECK(trees[1].descendants == q(1, 8));
    const auto ratio = best_tree_ratio(f);
    CHECK(ratio.lower == q(1, 2));
    CHECK(ratio.upper == q(1, 2));
}

TEST_CASE("roots only") {
    const StepPair p({{q(0), q(1), q(1, 2)}}, q(1));
    const auto f = build_forest(p, q(3, 4), 5);
    CHECK(f.roots.size() == 1);
    CHECK(f.nodes.size() == 1);
    const auto r = verify_forest(f);
    CHECK(r.passed());
    CHECK(r.defect == 0);
    CHECK(best_tree_ratio(f).lower == 0);
    CHECK(best_tree_ratio(f).upper == 0);
}

TEST_CASE("trivial pair") {
    const StepPair p({{q(0), q(1, 2), q(1, 2)}}, q(1));
    const auto f = build_forest(p, q(3, 4), 3);
    CHECK(f.roots.empty());
    CHECK(tree_masses(f).empty());
    CHECK_THROWS_AS(best_tree_ratio(f), Degenerate);
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(build_forest(oracle::worked_example_pair(), q(7, 10), 0), InvalidParameter);
    CHECK_THROWS_AS(build_forest(oracle::worked_example_pair(), q(9, 10), 4), NotInLambda);
    const StepPair bad({{q(0), q(3, 4), q(1, 2)}}, q(1));
    CHECK_THROWS_AS(build_forest(bad, q(7, 10), 4), NotInLambda);
}

TEST_CASE("residual factor") {
    CHECK(residual_factor(q(7, 10)) == q(3, 4));
    CHECK(residual_factor(q(1)) == 0);
    CHECK_THROWS_AS(residual_factor(q(1, 2)), InvalidParameter);
}

TEST_CASE("forests of reduced random pairs") {
    std::mt19937_64 rng(59);
    for (int t = 0; t < 120; ++t) {
        const long n = 2 + t % 3;
        const auto s = symmetrize(oracle::random_model(rng, n, 2 + t % 5));
        for (const auto& d : {q(3, 5), q(3, 4)}) {
            const auto pair = reduce_to_lambda_delta(model_to_step_pair(s.model, d), d, n);
            const auto f = build_forest(pair, d, 8);
            const auto r = verify_forest(f);
            CHECK(r.passed());
            CHECK(pairwise_disjoint(f));
            CHECK(r.materialized + r.defect == measure_high(pair));
            if (!f.roots.empty()) {
                Rational roots = 0;
                for (auto i : f.roots) roots += f.nodes[i].length();
                CHECK(roots == measure_high(pair) - measure_low(pair));
                CHECK(best_tree_ratio(f).lower <= (1 - d) / d);
            }
        }
    }
}
