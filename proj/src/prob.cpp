#include "coherent/prob.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "coherent/errors.hpp"

namespace coherent {

namespace {

void require_distinct_ids(const AtomSet& atoms, std::size_t atom_count, const char* what) {
    std::vector<bool> seen(atom_count, false);
    for (AtomId a : atoms) {
        if (a >= atom_count) {
            throw InvalidParameter(std::string(what) + ": atom id " + std::to_string(a) +
                                   " out of range");
        }
        if (seen[a]) {
            throw InvalidParameter(std::string(what) + ": atom id " + std::to_string(a) +
                                   " repeated");
        }
        seen[a] = true;
    }
}

}  // namespace

FiniteSpace::FiniteSpace(std::vector<Rational> masses) : masses_(std::move(masses)) {
    if (masses_.empty()) throw InvalidParameter("probability space needs at least one atom");
    Rational total = 0;
    for (const auto& m : masses_) {
        if (m < 0) throw InvalidParameter("negative atom mass " + to_string(m));
        total += m;
    }
    if (total != 1) throw InvalidParameter("atom masses sum to " + to_string(total) + ", not 1");
}

Rational FiniteSpace::mass_of(const AtomSet& atoms) const {
    Rational total = 0;
    for (AtomId a : atoms) total += masses_[a];
    return total;
}

Partition::Partition(std::vector<AtomSet> blocks, std::size_t atom_count)
    : blocks_(std::move(blocks)), block_of_(atom_count, atom_count) {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (blocks_[b].empty()) throw InvalidParameter("partition has an empty block");
        for (AtomId a : blocks_[b]) {
            if (a >= atom_count) {
                throw InvalidParameter("partition block mentions atom " + std::to_string(a) +
                                       " outside the space");
            }
            if (block_of_[a] != atom_count) {
                throw InvalidParameter("atom " + std::to_string(a) + " lies in two blocks");
            }
            block_of_[a] = b;
        }
    }
    for (AtomId a = 0; a < atom_count; ++a) {
        if (block_of_[a] == atom_count) {
            throw InvalidParameter("atom " + std::to_string(a) + " not covered by the partition");
        }
    }
}

Partition Partition::trivial(std::size_t atom_count) {
    AtomSet all(atom_count);
    for (AtomId a = 0; a < atom_count; ++a) all[a] = a;
    return Partition({std::move(all)}, atom_count);
}

Partition Partition::discrete(std::size_t atom_count) {
    std::vector<AtomSet> blocks;
    for (AtomId a = 0; a < atom_count; ++a) blocks.push_back({a});
    return Partition(std::move(blocks), atom_count);
}

CoherentModel::CoherentModel(FiniteSpace space, AtomSet event, std::vector<Partition> partitions)
    : space_(std::move(space)),
      event_(std::move(event)),
      in_event_(space_.size(), false),
      partitions_(std::move(partitions)) {
    if (partitions_.empty()) throw InvalidParameter("model needs at least one agent");
    require_distinct_ids(event_, space_.size(), "event_A");
    for (AtomId a : event_) in_event_[a] = true;
    for (const auto& p : partitions_) {
        if (p.atom_count() != space_.size()) {
            throw InvalidParameter("partition built for a space of different size");
        }
    }
    opinions_.reserve(partitions_.size());
    for (const auto& p : partitions_) opinions_.push_back(condexp(space_, event_, p));
}

std::vector<Rational> condexp(const FiniteSpace& space, const AtomSet& event,
                              const Partition& partition) {
    std::vector<bool> in_event(space.size(), false);
    for (AtomId a : event) in_event.at(a) = true;
    std::vector<Rational> out(space.size());
    for (const auto& block : partition.blocks()) {
        Rational total = 0;
        Rational inside = 0;
        bool any_in = false;
        bool any_out = false;
        for (AtomId a : block) {
            total += space.mass(a);
            if (in_event[a]) {
                inside += space.mass(a);
                any_in = true;
            } else {
                any_out = true;
            }
        }
        Rational value;
        if (total > 0) {
            value = inside / total;
        } else if (!any_out) {
            value = 1;
        } else if (!any_in) {
            value = 0;
        } else {
            value = half();
        }
        for (AtomId a : block) out[a] = value;
    }
    return out;
}

const OpinionMatrix& opinions(const CoherentModel& model) { return model.opinions(); }

std::vector<Rational> max_gap(const CoherentModel& model) {
    const auto& x = model.opinions();
    std::vector<Rational> gap(model.atoms());
    for (AtomId w = 0; w < model.atoms(); ++w) {
        Rational hi = x[0][w];
        Rational lo = x[0][w];
        for (std::size_t j = 1; j < model.agents(); ++j) {
            if (x[j][w] > hi) hi = x[j][w];
            if (x[j][w] < lo) lo = x[j][w];
        }
        gap[w] = hi - lo;
    }
    return gap;
}

void require_threshold(const Rational& delta) {
    if (!(delta > half() && delta <= 1)) {
        throw InvalidParameter("threshold " + to_string(delta) + " outside (1/2, 1]");
    }
}

Rational tail_prob(const CoherentModel& model, const Rational& delta) {
    require_threshold(delta);
    const auto gap = max_gap(model);
    Rational total = 0;
    for (AtomId w = 0; w < model.atoms(); ++w) {
        if (gap[w] >= delta) total += model.space().mass(w);
    }
    return total;
}

Rational tail_prob_on_A(const CoherentModel& model, const Rational& delta) {
    require_threshold(delta);
    const auto gap = max_gap(model);
    Rational total = 0;
    for (AtomId w : model.event()) {
        if (gap[w] >= delta) total += model.space().mass(w);
    }
    return total;
}

Rational expected_max_gap(const CoherentModel& model) {
    const auto gap = max_gap(model);
    Rational total = 0;
    for (AtomId w = 0; w < model.atoms(); ++w) total += model.space().mass(w) * gap[w];
    return total;
}

std::size_t value_count(const CoherentModel& model) {
    std::size_t best = 0;
    for (const auto& row : model.opinions()) {
        std::set<Rational> values(row.begin(), row.end());
        best = std::max(best, values.size());
    }
    return best;
}

ConditionalIdentityReport check_conditional_identity(const CoherentModel& model,
                                                     std::size_t agent, const Rational& y) {
    if (agent >= model.agents()) throw InvalidParameter("agent index out of range");
    if (!(y > 0 && y <= 1)) throw InvalidParameter("level " + to_string(y) + " outside (0, 1]");
    const auto& row = model.opinions()[agent];
    Rational on_a = 0;
    Rational off_a = 0;
    for (AtomId w = 0; w < model.atoms(); ++w) {
        if (row[w] != y) continue;
        (model.in_event(w) ? on_a : off_a) += model.space().mass(w);
    }
    ConditionalIdentityReport report;
    report.lhs = off_a;
    report.rhs = on_a * (1 - y) / y;
    report.holds = report.lhs == report.rhs;
    return report;
}

CprimeReport check_cprime(const CoherentModel& model) {
    CprimeReport report;
    report.prob_A = model.space().mass_of(model.event());
    report.half_mass = report.prob_A == half();

    // level -> sum_i P(X_i = level, A)
    std::map<Rational, Rational> on_a;
    std::set<Rational> levels;
    for (const auto& row : model.opinions()) {
        for (AtomId w = 0; w < model.atoms(); ++w) {
            if (row[w] > 0) levels.insert(row[w]);
            if (1 - row[w] > 0) levels.insert(1 - row[w]);
            if (model.in_event(w)) on_a[row[w]] += model.space().mass(w);
        }
    }
    auto mass_at = [&](const Rational& v) {
        auto it = on_a.find(v);
        return it == on_a.end() ? Rational(0) : it->second;
    };
    for (const auto& x : levels) {
        Rational lhs = (1 - x) / x * mass_at(x);
        Rational rhs = mass_at(1 - x);
        report.levels.push_back(x);
        if (lhs != rhs) report.failures.push_back({x, lhs, rhs});
    }
    report.balanced = report.failures.empty();
    return report;
}

Rational bound_formula(long n, const Rational& delta) {
    if (n < 2) throw InvalidParameter("number of agents must be at least 2");
    require_threshold(delta);
    Rational value = Rational(n) * (1 - delta) / (2 - delta);
    return value > 1 ? Rational(1) : value;
}

}  // namespace coherent
