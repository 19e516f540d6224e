#include "coherent/pipeline.hpp"

#include "coherent/bellman.hpp"
#include "coherent/errors.hpp"
#include "coherent/extremal.hpp"

namespace coherent {

bool PipelineReport::passed() const { return failing_stage().empty(); }

std::string PipelineReport::failing_stage() const {
    for (const auto& s : stages) {
        if (!s.passed) return s.name;
    }
    return {};
}

namespace {

bool stage(PipelineReport& report, std::string name, bool ok, std::string detail = {}) {
    report.stages.push_back({std::move(name), ok, std::move(detail)});
    return ok;
}

void run_chain(PipelineReport& report, const CoherentModel& input,
               const std::optional<Rational>& expected_phi) {
    const Rational& delta = report.delta;
    report.tail = tail_prob(input, delta);
    report.bound = bound_formula(report.n, delta);
    report.phi_ceiling = (1 - delta) / delta;
    const bool tail_ok = report.extremal ? report.tail == report.bound : report.tail <= report.bound;
    if (!stage(report, "model", tail_ok,
               "tail " + to_string(report.tail) + ", bound " + to_string(report.bound))) {
        return;
    }

    CoherentModel work = input;
    report.cprime = check_cprime(work);
    if (!report.cprime->passed()) {
        if (report.extremal) {
            stage(report, "cprime", false, "extremal model outside C'");
            return;
        }
        const SymmetrizedModel sym = symmetrize(input);
        report.symmetrized = true;
        report.symmetry = verify_sym_properties(input, sym, delta);
        if (!stage(report, "symmetrize", report.symmetry->passed())) return;
        work = sym.model;
        report.cprime = check_cprime(work);
    }
    if (!stage(report, "cprime", report.cprime->passed())) return;

    report.pair = model_to_step_pair(work, delta);
    report.pair_membership = lambda_membership(*report.pair, report.n);
    report.pair_gap = gap_measure(*report.pair, delta);
    report.tail_on_A = tail_prob_on_A(work, delta);
    const bool identity = report.pair_gap == report.tail_on_A;
    if (!stage(report, "step_pair", report.pair_membership->in_lambda() && identity,
               identity ? "" : "gap measure " + to_string(report.pair_gap) +
                                   " differs from P(gap on A) " + to_string(report.tail_on_A))) {
        return;
    }

    report.reduced = reduce_to_lambda_delta(*report.pair, delta, report.n);
    report.reduced_membership = lambda_delta_membership(*report.reduced, delta, report.n);
    report.reduced_gap = gap_measure(*report.reduced, delta);
    const bool monotone = report.reduced_gap >= report.pair_gap;
    if (!stage(report, "reduction", report.reduced_membership->in_lambda_delta() && monotone,
               monotone ? "" : "reduction lowered the gap measure")) {
        return;
    }

    const Rational high = measure_high(*report.reduced);
    const Rational low = measure_low(*report.reduced);
    report.degenerate = low == 0 && report.reduced_gap == 0;
    if (high == 0) {
        stage(report, "forest", true, "no roots");
        stage(report, "ratios", report.tail == 0 && low == 0, "all measures vanish");
        return;
    }

    const Forest forest = build_forest(*report.reduced, delta, report.depth);
    report.forest = verify_forest(forest);
    if (!stage(report, "forest", report.forest->passed())) return;

    std::string why;
    bool ok = true;
    if (high <= low) {
        ok = false;
        why = "lambda(H>1/2) does not exceed lambda(L<1/2)";
    } else {
        report.phi = phi_ratio(*report.reduced);
        report.tree_ratio = best_tree_ratio(forest);
        report.recombined = recombined_bound(report.n, report.phi_ceiling);
        if (*report.phi > report.phi_ceiling) {
            ok = false;
            why = "phi exceeds (1-delta)/delta";
        } else if (expected_phi && *report.phi != *expected_phi) {
            ok = false;
            why = "phi differs from " + to_string(*expected_phi);
        } else if (*report.phi > report.tree_ratio->upper) {
            ok = false;
            why = "phi exceeds the best tree ratio";
        } else if (report.tree_ratio->lower > report.phi_ceiling) {
            ok = false;
            why = "a tree ratio exceeds (1-delta)/delta";
        } else if (min(Rational(1), *report.recombined) != report.bound) {
            ok = false;
            why = "recombined bound differs from the closed form";
        } else if (report.tail > report.bound) {
            ok = false;
            why = "tail exceeds the recombined bound";
        }
    }
    stage(report, "ratios", ok, why);
}

}  // namespace

PipelineReport run_pipeline(long n, const Rational& delta, int depth) {
    if (depth < 1) throw InvalidParameter("depth must be at least 1");
    const ExtremalSpec spec = extremal_spec(n, delta);
    PipelineReport report;
    report.n = n;
    report.delta = delta;
    report.depth = depth;
    report.extremal = true;
    std::optional<Rational> expected;
    if (spec.delta_eff < 1) expected = (1 - spec.delta_eff) / spec.delta_eff;
    run_chain(report, build_extremal(n, delta), expected);
    return report;
}

PipelineReport run_pipeline(const CoherentModel& model, const Rational& delta, int depth) {
    if (depth < 1) throw InvalidParameter("depth must be at least 1");
    require_threshold(delta);
    PipelineReport report;
    report.n = static_cast<long>(model.agents());
    report.delta = delta;
    report.depth = depth;
    run_chain(report, model, std::nullopt);
    return report;
}

}  // namespace coherent
