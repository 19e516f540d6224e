#pragma once

#include <cstddef>
#include <vector>

#include "coherent/rational.hpp"

namespace coherent {

using AtomId = std::size_t;
using AtomSet = std::vector<AtomId>;  // distinct ids, order preserved as given

/// Finite probability space: one exact mass per atom, summing to 1.
class FiniteSpace {
  public:
    explicit FiniteSpace(std::vector<Rational> masses);

    std::size_t size() const { return masses_.size(); }
    const Rational& mass(AtomId atom) const { return masses_[atom]; }
    const std::vector<Rational>& masses() const { return masses_; }
    Rational mass_of(const AtomSet& atoms) const;

    friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;

  private:
    std::vector<Rational> masses_;
};

/// Partition of {0, .., N-1} into disjoint non-empty blocks.
class Partition {
  public:
    Partition(std::vector<AtomSet> blocks, std::size_t atom_count);

    static Partition trivial(std::size_t atom_count);
    static Partition discrete(std::size_t atom_count);

    const std::vector<AtomSet>& blocks() const { return blocks_; }
    std::size_t block_of(AtomId atom) const { return block_of_[atom]; }
    std::size_t atom_count() const { return block_of_.size(); }

    friend bool operator==(const Partition&, const Partition&) = default;

  private:
    std::vector<AtomSet> blocks_;
    std::vector<std::size_t> block_of_;
};

using OpinionMatrix = std::vector<std::vector<Rational>>;  // [agent][atom]

/// Event A together with one partition per agent on a finite space.
/// The opinion matrix X[j][w] = P(A | G_j)(w) is computed once on
/// construction.
class CoherentModel {
  public:
    CoherentModel(FiniteSpace space, AtomSet event, std::vector<Partition> partitions);

    const FiniteSpace& space() const { return space_; }
    const AtomSet& event() const { return event_; }
    bool in_event(AtomId atom) const { return in_event_[atom]; }
    const std::vector<Partition>& partitions() const { return partitions_; }
    std::size_t agents() const { return partitions_.size(); }
    std::size_t atoms() const { return space_.size(); }
    const OpinionMatrix& opinions() const { return opinions_; }

    friend bool operator==(const CoherentModel& a, const CoherentModel& b) {
        return a.space_ == b.space_ && a.event_ == b.event_ && a.partitions_ == b.partitions_;
    }

  private:
    FiniteSpace space_;
    AtomSet event_;
    std::vector<bool> in_event_;
    std::vector<Partition> partitions_;
    OpinionMatrix opinions_;
};

/// Conditional probability of `event` given the blocks of `partition`, one
/// value per atom. A zero-mass block gets 1 when it lies inside the event,
/// 0 when it misses the event, and 1/2 when it straddles it.
std::vector<Rational> condexp(const FiniteSpace& space, const AtomSet& event,
                              const Partition& partition);

const OpinionMatrix& opinions(const CoherentModel& model);

/// Per atom: max over agent pairs of |X_i - X_j|.
std::vector<Rational> max_gap(const CoherentModel& model);

/// P(max gap >= delta). Requires 1/2 < delta <= 1.
Rational tail_prob(const CoherentModel& model, const Rational& delta);

/// P({max gap >= delta} and A).
Rational tail_prob_on_A(const CoherentModel& model, const Rational& delta);

/// E[max gap].
Rational expected_max_gap(const CoherentModel& model);

/// Largest number of distinct values taken by a single agent's opinion.
std::size_t value_count(const CoherentModel& model);

struct ConditionalIdentityReport {
    bool holds = false;
    Rational lhs;  // P({X = y} and A^c)
    Rational rhs;  // P({X = y} and A) * (1 - y) / y
};

/// Balance identity for one agent at level y in (0, 1].
ConditionalIdentityReport check_conditional_identity(const CoherentModel& model,
                                                     std::size_t agent, const Rational& y);

struct CprimeFailure {
    Rational level;
    Rational lhs;
    Rational rhs;
};

struct CprimeReport {
    Rational prob_A;
    bool half_mass = false;
    bool balanced = false;
    std::vector<Rational> levels;  // every level that was checked
    std::vector<CprimeFailure> failures;
    bool passed() const { return half_mass && balanced; }
};

/// Checks P(A) = 1/2 and, for every x in (0, 1] such that x or 1 - x is an
/// attained opinion, (1-x)/x * sum_i P(X_i = x, A) = sum_i P(X_i = 1-x, A).
CprimeReport check_cprime(const CoherentModel& model);

/// min(1, n(1 - delta)/(2 - delta)) for n >= 2 and 1/2 < delta <= 1.
Rational bound_formula(long n, const Rational& delta);

/// Throws InvalidParameter unless 1/2 < delta <= 1.
void require_threshold(const Rational& delta);

}  // namespace coherent
