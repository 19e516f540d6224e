#pragma once

#include <cstddef>
#include <vector>

#include "coherent/rational.hpp"

namespace coherent {

/// Closed-form value (1 - x)/delta of the alternating sequence
/// x, 1-x+delta, x, ... on [delta, 1].
Rational psi(const Rational& x, const Rational& delta);

/// Partial sum over n = 0..terms of prod_{i<=n} (1-x_i)/x_i along the
/// alternating sequence starting at x.
Rational alternating_value(const Rational& x, const Rational& delta, int terms);

struct RecurrenceReport {
    bool identity = false;  // psi(x) = (1-x)/x (1 + psi(1-x+delta)) at every sample
    bool boundary_argmax = false;  // no sample y >= 1-x+delta beats psi(1-x+delta)
    std::vector<Rational> identity_failures;
    std::vector<Rational> argmax_failures;
    bool passed() const { return identity && boundary_argmax; }
};

RecurrenceReport verify_recurrence(const Rational& delta, const std::vector<Rational>& samples);

/// delta + j*step and 1 - j*step inside [delta, 1], plus both endpoints.
/// Closed under x -> 1 - x + delta.
std::vector<Rational> bellman_grid(const Rational& delta, const Rational& step);

struct BellmanTable {
    Rational delta;
    Rational step;
    std::vector<Rational> grid;               // ascending
    std::vector<std::vector<Rational>> values;  // values[k][i] = Phi_k(grid[i]), k = 0..horizon
    int horizon() const { return static_cast<int>(values.size()) - 1; }
    const std::vector<Rational>& last() const { return values.back(); }
};

/// Backward induction Phi_{k+1}(x) = (1-x)/x (1 + max{Phi_k(y) : y in grid,
/// y >= 1-x+delta}), Phi_0 = 0. Grid points of one generation are evaluated
/// in parallel.
BellmanTable dp_upper(const Rational& delta, const Rational& step, int horizon);

/// Same table computed one point at a time with a direct scan over all
/// admissible y. Reference for dp_upper.
BellmanTable dp_upper_serial(const Rational& delta, const Rational& step, int horizon);

struct TableCheck {
    bool below_candidate = false;  // Phi_k <= psi for every k and grid point
    bool monotone = false;         // Phi_k <= Phi_{k+1}
    Rational max_deficiency;       // max over grid of psi - Phi_horizon
    Rational worst_point;
};

TableCheck check_table(const BellmanTable& table);

/// sup over [delta, 1] of psi, i.e. (1 - delta)/delta.
Rational phi_supremum(const Rational& delta);

/// Combines lambda(L<1/2) <= phi (lambda(H>1/2) - lambda(L<1/2)) with the
/// budget lambda(H>1/2) + lambda(L<1/2) <= n/2 into the bound on
/// 2 lambda(L<1/2).
Rational recombined_bound(long n, const Rational& phi);

}  // namespace coherent
