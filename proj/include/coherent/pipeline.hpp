#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coherent/forest.hpp"
#include "coherent/prob.hpp"
#include "coherent/steppair.hpp"
#include "coherent/symmetry.hpp"

namespace coherent {

struct StageResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Record of the reduction chain model -> (symmetrize) -> step pair ->
/// Lambda^delta pair -> forest -> ratios. A stage only runs when every
/// earlier stage passed.
struct PipelineReport {
    long n = 0;
    Rational delta;
    int depth = 0;
    bool extremal = false;
    bool symmetrized = false;
    bool degenerate = false;  // lambda(L<1/2) = 0 and no gap mass

    Rational tail;
    Rational tail_on_A;
    Rational bound;
    std::optional<CprimeReport> cprime;
    std::optional<SymmetryReport> symmetry;
    std::optional<StepPair> pair;
    std::optional<LambdaReport> pair_membership;
    Rational pair_gap;
    std::optional<StepPair> reduced;
    std::optional<LambdaReport> reduced_membership;
    Rational reduced_gap;
    std::optional<ForestReport> forest;
    std::optional<RatioInterval> tree_ratio;
    std::optional<Rational> phi;
    Rational phi_ceiling;  // (1 - delta)/delta
    std::optional<Rational> recombined;

    std::vector<StageResult> stages;

    bool passed() const;
    /// Name of the first failing stage, empty when all passed.
    std::string failing_stage() const;
};

/// Chain on build_extremal(n, delta).
PipelineReport run_pipeline(long n, const Rational& delta, int depth);

/// Chain on a user model with n = number of agents. A model outside C'
/// is symmetrized first.
PipelineReport run_pipeline(const CoherentModel& model, const Rational& delta, int depth);

}  // namespace coherent
