#include "coherent/forest.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "coherent/errors.hpp"
#include "coherent/prob.hpp"

namespace coherent {

namespace {

struct Piece {
    Rational from;
    Rational to;
    Rational high;
};

Rational pow(const Rational& base, int exponent) {
    Rational out = 1;
    for (int i = 0; i < exponent; ++i) out *= base;
    return out;
}

}  // namespace

Rational residual_factor(const Rational& delta) {
    require_threshold(delta);
    return (1 - delta) / (2 * delta - 1);
}

Forest build_forest(const StepPair& pair, const Rational& delta, int depth_limit) {
    if (depth_limit < 1) throw InvalidParameter("depth limit must be at least 1");
    const LambdaReport membership = lambda_delta_membership(pair, delta, minimal_budget(pair));
    if (!membership.in_lambda_delta()) {
        throw NotInLambda("forest needs a Lambda^delta pair");
    }

    Forest forest;
    forest.pair = pair;
    forest.delta = delta;
    forest.depth_limit = depth_limit;

    std::map<Rational, std::deque<Piece>> unused;  // L level -> free pieces, left to right
    for (std::size_t s = 0; s < pair.size(); ++s) {
        const auto& seg = pair.segments()[s];
        if (seg.low < half()) unused[seg.low].push_back({seg.from, pair.end_of(s), seg.high});
        if (seg.high > half() && seg.low == half()) {
            ForestNode node;
            node.from = seg.from;
            node.to = pair.end_of(s);
            node.high = seg.high;
            node.depth = 1;
            node.root = forest.nodes.size();
            forest.roots.push_back(forest.nodes.size());
            forest.nodes.push_back(std::move(node));
        }
    }

    std::vector<std::size_t> generation = forest.roots;
    for (int depth = 1; !generation.empty(); ++depth) {
        std::vector<std::size_t> next;
        for (std::size_t idx : generation) {
            if (forest.nodes[idx].high == 1) {
                forest.nodes[idx].expanded = true;
                continue;
            }
            if (depth == depth_limit) continue;
            const Rational x = forest.nodes[idx].high;
            Rational remaining = (1 - x) / x * forest.nodes[idx].length();
            auto& pool = unused[1 - x];
            while (remaining > 0) {
                if (pool.empty()) {
                    throw InternalInvariant("level {L = " + to_string(1 - x) +
                                            "} exhausted while allocating children");
                }
                Piece& piece = pool.front();
                const Rational take = min(piece.to - piece.from, remaining);
                ForestNode child;
                child.from = piece.from;
                child.to = piece.from + take;
                child.high = piece.high;
                child.depth = depth + 1;
                child.parent = idx;
                child.root = forest.nodes[idx].root;
                remaining -= take;
                piece.from = child.to;
                if (piece.from == piece.to) pool.pop_front();
                forest.nodes[idx].children.push_back(forest.nodes.size());
                next.push_back(forest.nodes.size());
                forest.nodes.push_back(std::move(child));
            }
            forest.nodes[idx].expanded = true;
        }
        generation = std::move(next);
    }

    const Rational factor = residual_factor(delta);
    forest.residual_bound = 0;
    for (const auto& node : forest.nodes) {
        if (!node.expanded) forest.residual_bound += factor * node.length();
    }
    return forest;
}

ForestReport verify_forest(const Forest& forest) {
    ForestReport report;
    const StepPair& pair = forest.pair;
    const Rational& delta = forest.delta;
    auto fail = [&](std::string what) { report.failures.push_back(std::move(what)); };

    std::vector<std::size_t> order(forest.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return forest.nodes[a].from < forest.nodes[b].from;
    });
    report.disjoint = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& node = forest.nodes[order[i]];
        if (!(node.from < node.to)) {
            report.disjoint = false;
            fail("empty node interval at " + to_string(node.from));
        }
        if (i + 1 < order.size() && forest.nodes[order[i + 1]].from < node.to) {
            report.disjoint = false;
            fail("nodes overlap near " + to_string(node.to));
        }
    }

    report.constant_high = true;
    report.above_threshold = true;
    report.low_matches_parent = true;
    report.child_lengths = true;
    for (const auto& node : forest.nodes) {
        const std::size_t s = pair.locate(node.from);
        if (s == pair.size() || pair.end_of(s) < node.to) {
            report.constant_high = false;
            fail("node [" + to_string(node.from) + ", " + to_string(node.to) +
                 ") is not inside one segment");
            continue;
        }
        const Segment& seg = pair.segments()[s];
        if (seg.high != node.high || !(node.high > half())) {
            report.constant_high = false;
            fail("node H mismatch at " + to_string(node.from));
        }
        if (node.high < delta) {
            report.above_threshold = false;
            fail("node H below threshold at " + to_string(node.from));
        }
        const Rational expected_low =
            node.parent == ForestNode::no_parent ? half() : 1 - forest.nodes[node.parent].high;
        if (seg.low != expected_low) {
            report.low_matches_parent = false;
            fail("node L mismatch at " + to_string(node.from));
        }
        if (node.expanded) {
            Rational sum = 0;
            for (std::size_t c : node.children) sum += forest.nodes[c].length();
            if (sum != (1 - node.high) / node.high * node.length()) {
                report.child_lengths = false;
                fail("child lengths off at " + to_string(node.from));
            }
        }
    }

    report.high_measure = measure_high(pair);
    report.materialized = 0;
    for (const auto& node : forest.nodes) report.materialized += node.length();
    report.defect = report.high_measure - report.materialized;
    report.residual_bound = forest.residual_bound;
    report.covering = report.defect >= 0 && report.defect <= forest.residual_bound;
    if (!report.covering) fail("covering defect " + to_string(report.defect) + " not in [0, residual]");

    const Rational decay = (1 - delta) / delta;
    const Rational ceiling = report.high_measure * pow(decay, forest.depth_limit - 1) * delta /
                             (2 * delta - 1);
    report.residual_geometric = forest.residual_bound <= ceiling;
    if (!report.residual_geometric) fail("residual bound exceeds the geometric ceiling");

    std::map<Rational, Rational> all_at;
    std::map<Rational, Rational> expanded_at;
    std::map<Rational, Rational> child_at;  // keyed by parent H
    for (const auto& node : forest.nodes) {
        all_at[node.high] += node.length();
        if (node.expanded) expanded_at[node.high] += node.length();
        if (node.parent != ForestNode::no_parent) {
            child_at[forest.nodes[node.parent].high] += node.length();
        }
    }
    report.level_identity = true;
    for (const auto& [y, total] : all_at) {
        LevelBalance lb;
        lb.level = y;
        lb.expanded = (1 - y) / y * expanded_at[y];
        lb.children = child_at[y];
        lb.deficit = (1 - y) / y * total - lb.children;
        if (lb.expanded != lb.children || lb.deficit < 0 || lb.deficit > forest.residual_bound) {
            report.level_identity = false;
            fail("level identity fails at H = " + to_string(y));
        }
        report.levels.push_back(std::move(lb));
    }
    return report;
}

std::vector<TreeMass> tree_masses(const Forest& forest) {
    std::vector<TreeMass> out;
    std::map<std::size_t, std::size_t> slot;
    for (std::size_t r : forest.roots) {
        slot[r] = out.size();
        TreeMass t;
        t.root = r;
        t.root_length = forest.nodes[r].length();
        t.descendants = 0;
        t.residual = 0;
        out.push_back(std::move(t));
    }
    const Rational factor = residual_factor(forest.delta);
    for (std::size_t i = 0; i < forest.nodes.size(); ++i) {
        const auto& node = forest.nodes[i];
        TreeMass& t = out[slot.at(node.root)];
        if (i != node.root) t.descendants += node.length();
        if (!node.expanded) t.residual += factor * node.length();
    }
    return out;
}

RatioInterval best_tree_ratio(const Forest& forest) {
    if (forest.roots.empty()) throw Degenerate("forest has no roots");
    RatioInterval best;
    bool first = true;
    for (const auto& t : tree_masses(forest)) {
        const Rational lower = t.descendants / t.root_length;
        const Rational upper = (t.descendants + t.residual) / t.root_length;
        if (first || lower > best.lower) best.lower = lower;
        if (first || upper > best.upper) best.upper = upper;
        first = false;
    }
    return best;
}

}  // namespace coherent
