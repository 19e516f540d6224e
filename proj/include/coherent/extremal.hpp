#pragma once

#include "coherent/prob.hpp"

namespace coherent {

/// Masses and threshold of the 2n+2 atom extremal model. Atom ids are
/// A_0..A_n = 0..n and B_0..B_n = n+1..2n+1.
struct ExtremalSpec {
    long n = 0;
    Rational delta;
    Rational delta_eff;  // max(delta, (n-2)/(n-1))
    Rational core_mass;  // mass of A_0 and of B_0
    Rational side_mass;  // mass of each A_i and B_i, 1 <= i <= n

    AtomId a(long i) const { return static_cast<AtomId>(i); }
    AtomId b(long i) const { return static_cast<AtomId>(n + 1 + i); }
};

ExtremalSpec extremal_spec(long n, const Rational& delta);

/// Model whose tail probability at delta equals bound_formula(n, delta).
/// Agent i (0-based here, 1-based i+1 in the usual labelling) sees the
/// blocks {A_i}, {B_i}, (A u B_{i+1}) \ (A_i u A_{i+1}) and
/// (B u A_{i+1}) \ (B_i u B_{i+1}) with indices taken cyclically in 1..n.
CoherentModel build_extremal(long n, const Rational& delta);

struct ExtremalCertificate {
    ExtremalSpec spec;
    CoherentModel model;
    Rational tail;
    Rational bound;
    bool attained = false;
};

ExtremalCertificate certify_extremal(long n, const Rational& delta);

}  // namespace coherent
