#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "coherent/steppair.hpp"

namespace coherent {

struct ForestNode {
    static constexpr std::size_t no_parent = std::numeric_limits<std::size_t>::max();

    Rational from;
    Rational to;
    Rational high;  // constant value of H on [from, to)
    int depth = 1;
    std::size_t parent = no_parent;
    std::size_t root = 0;  // index of the tree's root node
    std::vector<std::size_t> children;
    bool expanded = false;  // children allocated (always true when high = 1)

    Rational length() const { return to - from; }
};

/// Interval forest of a Lambda^delta pair, truncated at depth_limit. Roots
/// are the segments of {H > 1/2, L = 1/2}; a node with H = x owns children
/// of total length (1-x)/x times its own length, taken leftmost-first from the
/// still unused part of {L = 1-x}.
struct Forest {
    StepPair pair;
    Rational delta;
    int depth_limit = 1;
    std::vector<ForestNode> nodes;  // generation by generation
    std::vector<std::size_t> roots;
    Rational residual_bound;  // bounds the measure of all unmaterialized descendants
};

/// Throws NotInLambda unless the pair is a Lambda^delta member and
/// InvalidParameter when depth_limit < 1.
Forest build_forest(const StepPair& pair, const Rational& delta, int depth_limit);

/// (1-delta)/(2 delta - 1): descendant measure per unit length of an
/// unexpanded node, summed over all later generations.
Rational residual_factor(const Rational& delta);

struct LevelBalance {
    Rational level;     // y, a value of H on some node
    Rational expanded;  // (1-y)/y * length of expanded nodes with H = y
    Rational children;  // length of non-root nodes with L = 1-y
    Rational deficit;   // (1-y)/y * length of all nodes with H = y, minus children
};

struct ForestReport {
    bool disjoint = false;
    bool constant_high = false;     // each node sits in one segment with H = high > 1/2
    bool above_threshold = false;   // H >= delta on every node
    bool low_matches_parent = false;  // L = 1/2 on roots, L = 1 - parent H otherwise
    bool child_lengths = false;
    bool covering = false;           // 0 <= defect <= residual_bound
    bool residual_geometric = false;  // residual <= lambda(H>1/2) r^(d-1) delta/(2 delta-1)
    bool level_identity = false;
    Rational high_measure;
    Rational materialized;
    Rational defect;
    Rational residual_bound;
    std::vector<LevelBalance> levels;
    std::vector<std::string> failures;

    bool passed() const {
        return disjoint && constant_high && above_threshold && low_matches_parent &&
               child_lengths && covering && residual_geometric && level_identity;
    }
};

ForestReport verify_forest(const Forest& forest);

struct TreeMass {
    std::size_t root = 0;  // node index
    Rational root_length;
    Rational descendants;  // materialized measure below the root
    Rational residual;     // bound on what truncation left out of this tree
};

std::vector<TreeMass> tree_masses(const Forest& forest);

struct RatioInterval {
    Rational lower;
    Rational upper;
};

/// Encloses max over trees of (descendant measure)/(root length).
/// Throws Degenerate for a forest without roots.
RatioInterval best_tree_ratio(const Forest& forest);

}  // namespace coherent
