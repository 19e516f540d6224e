#pragma once

#include <cstddef>
#include <vector>

#include "coherent/prob.hpp"
#include "coherent/steppair.hpp"

namespace coherent {

/// Fair-coin mixture of a model with its complement. Atom (w, u) has id
/// u * N + w and mass m(w)/2; the event is {(w,1): w in A} u {(w,0): w not in A};
/// every block of G_i is split by the coin.
struct SymmetrizedModel {
    CoherentModel model;
    std::size_t original_atoms = 0;

    AtomId atom(AtomId original, int coin) const {
        return static_cast<AtomId>(coin) * original_atoms + original;
    }
};

SymmetrizedModel symmetrize(const CoherentModel& model);

struct SymmetryReport {
    bool half_mass = false;         // P(tilde A) = 1/2
    bool opinions_mixed = false;    // tilde X(w,1) = X(w), tilde X(w,0) = 1 - X(w)
    bool joint_reflection = false;  // property (ii) over all attained value vectors
    bool level_balance = false;     // property (iii) over attained levels
    bool tail_doubling = false;     // property (iv)
    Rational tail_original;
    Rational tail_symmetrized_on_A;
    std::size_t vectors_checked = 0;
    std::size_t levels_checked = 0;
    bool passed() const {
        return half_mass && opinions_mixed && joint_reflection && level_balance && tail_doubling;
    }
};

/// Exact check of the mixture properties. Throws InvalidParameter when
/// `sym` is not the symmetrization of `original`.
SymmetryReport verify_sym_properties(const CoherentModel& original, const SymmetrizedModel& sym,
                                     const Rational& delta);

enum class ClassKind { no_gap, gap };

struct OpinionClass {
    AtomSet atoms;                 // subset of A with this opinion vector
    std::vector<Rational> values;  // constant opinion vector on the class
    Rational prob;                 // P(A_k)
    ClassKind kind = ClassKind::no_gap;
    std::size_t high = 0;  // for gap classes: agent with the larger opinion
    std::size_t low = 0;   // for gap classes: agent with the smaller opinion
};

/// Positive-mass atoms of A grouped by opinion vector, in order of first
/// atom id. Gap classes carry the first ordered agent pair (high, low) with
/// X_high >= X_low + delta.
std::vector<OpinionClass> class_decomposition(const CoherentModel& model, const Rational& delta);

/// Step pair with gap_measure(pair, delta) = tail_prob_on_A(model, delta).
/// Throws NotInCprime when check_cprime(model) fails.
StepPair model_to_step_pair(const CoherentModel& model, const Rational& delta);

}  // namespace coherent
