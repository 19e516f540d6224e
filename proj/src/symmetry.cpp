#include "coherent/symmetry.hpp"

#include <map>

#include "coherent/errors.hpp"

namespace coherent {

SymmetrizedModel symmetrize(const CoherentModel& model) {
    const std::size_t n_atoms = model.atoms();
    auto id = [n_atoms](AtomId w, int coin) { return static_cast<AtomId>(coin) * n_atoms + w; };

    std::vector<Rational> masses(2 * n_atoms);
    AtomSet event;
    for (int coin = 0; coin < 2; ++coin) {
        for (AtomId w = 0; w < n_atoms; ++w) {
            masses[id(w, coin)] = model.space().mass(w) / 2;
            if (model.in_event(w) == (coin == 1)) event.push_back(id(w, coin));
        }
    }
    std::vector<Partition> partitions;
    for (const auto& p : model.partitions()) {
        std::vector<AtomSet> blocks;
        for (const auto& block : p.blocks()) {
            for (int coin = 0; coin < 2; ++coin) {
                AtomSet copy;
                for (AtomId w : block) copy.push_back(id(w, coin));
                blocks.push_back(std::move(copy));
            }
        }
        partitions.emplace_back(std::move(blocks), 2 * n_atoms);
    }
    return {CoherentModel(FiniteSpace(std::move(masses)), std::move(event), std::move(partitions)),
            n_atoms};
}

SymmetryReport verify_sym_properties(const CoherentModel& original, const SymmetrizedModel& sym,
                                     const Rational& delta) {
    require_threshold(delta);
    if (sym.original_atoms != original.atoms() || !(symmetrize(original).model == sym.model)) {
        throw InvalidParameter("symmetrized model does not match the original");
    }
    SymmetryReport report;
    const auto& model = sym.model;
    const auto& x = original.opinions();
    const auto& xs = model.opinions();

    report.half_mass = model.space().mass_of(model.event()) == half();

    report.opinions_mixed = true;
    for (std::size_t j = 0; j < original.agents(); ++j) {
        for (AtomId w = 0; w < original.atoms(); ++w) {
            if (xs[j][sym.atom(w, 1)] != x[j][w] || xs[j][sym.atom(w, 0)] != 1 - x[j][w]) {
                report.opinions_mixed = false;
            }
        }
    }

    using Vector = std::vector<Rational>;
    std::map<Vector, Rational> on_a;
    std::map<Vector, Rational> off_a;
    for (AtomId w = 0; w < model.atoms(); ++w) {
        Vector v(model.agents());
        for (std::size_t j = 0; j < model.agents(); ++j) v[j] = xs[j][w];
        (model.in_event(w) ? on_a : off_a)[v] += model.space().mass(w);
    }
    auto reflect = [](Vector v) {
        for (auto& c : v) c = 1 - c;
        return v;
    };
    auto lookup = [](const std::map<Vector, Rational>& m, const Vector& v) {
        auto it = m.find(v);
        return it == m.end() ? Rational(0) : it->second;
    };
    std::map<Vector, bool> vectors;
    for (const auto& [v, _] : on_a) vectors[v] = true;
    for (const auto& [v, _] : off_a) vectors[reflect(v)] = true;
    report.joint_reflection = true;
    for (const auto& [v, _] : vectors) {
        if (lookup(on_a, v) != lookup(off_a, reflect(v))) report.joint_reflection = false;
    }
    report.vectors_checked = vectors.size();

    const CprimeReport balance = check_cprime(model);
    report.level_balance = balance.balanced;
    report.levels_checked = balance.levels.size();

    report.tail_original = tail_prob(original, delta);
    report.tail_symmetrized_on_A = tail_prob_on_A(model, delta);
    report.tail_doubling = report.tail_original == 2 * report.tail_symmetrized_on_A;
    return report;
}

std::vector<OpinionClass> class_decomposition(const CoherentModel& model, const Rational& delta) {
    require_threshold(delta);
    const auto& x = model.opinions();
    const std::size_t n = model.agents();
    std::vector<OpinionClass> classes;
    std::map<std::vector<Rational>, std::size_t> index;
    for (AtomId w = 0; w < model.atoms(); ++w) {
        if (!model.in_event(w) || model.space().mass(w) == 0) continue;
        std::vector<Rational> v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = x[j][w];
        auto [it, inserted] = index.emplace(v, classes.size());
        if (inserted) {
            OpinionClass c;
            c.values = std::move(v);
            c.prob = 0;
            classes.push_back(std::move(c));
        }
        auto& c = classes[it->second];
        c.atoms.push_back(w);
        c.prob += model.space().mass(w);
    }
    for (auto& c : classes) {
        bool found = false;
        for (std::size_t hi = 0; hi < n && !found; ++hi) {
            for (std::size_t lo = 0; lo < n && !found; ++lo) {
                if (hi != lo && c.values[hi] >= c.values[lo] + delta) {
                    c.kind = ClassKind::gap;
                    c.high = hi;
                    c.low = lo;
                    found = true;
                }
            }
        }
    }
    return classes;
}

StepPair model_to_step_pair(const CoherentModel& model, const Rational& delta) {
    require_threshold(delta);
    if (!check_cprime(model).passed()) {
        throw NotInCprime("model fails P(A) = 1/2 or the level-balance identity");
    }
    std::vector<Segment> segments;
    Rational at = 0;
    auto emit = [&](const Rational& high, const Rational& low, const Rational& len) {
        segments.push_back({at, high, low});
        at += len;
    };
    for (const auto& c : class_decomposition(model, delta)) {
        for (std::size_t s = 0; s < c.values.size(); ++s) {
            const Rational& v = c.values[s];
            if (c.kind == ClassKind::gap) {
                if (s == c.low) continue;
                if (s == c.high) {
                    emit(v, c.values[c.low], c.prob);
                    continue;
                }
            }
            emit(max(v, half()), min(v, half()), c.prob);
        }
    }
    return StepPair(std::move(segments), std::move(at));
}

}  // namespace coherent
