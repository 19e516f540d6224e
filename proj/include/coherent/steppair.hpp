#pragma once

#include <cstddef>
#include <vector>

#include "coherent/rational.hpp"

namespace coherent {

struct Segment {
    Rational from;
    Rational high;  // H on the segment
    Rational low;   // L on the segment
};

/// Right-continuous pair (H, L) of step functions on [0, inf). Segment s
/// covers [from_s, from_{s+1}); the last one ends at tail_from, after which
/// H = L = 1/2.
class StepPair {
  public:
    StepPair() = default;
    StepPair(std::vector<Segment> segments, Rational tail_from);

    const std::vector<Segment>& segments() const { return segments_; }
    const Rational& tail_from() const { return tail_from_; }
    std::size_t size() const { return segments_.size(); }
    Rational end_of(std::size_t s) const {
        return s + 1 < segments_.size() ? segments_[s + 1].from : tail_from_;
    }
    Rational length(std::size_t s) const { return end_of(s) - segments_[s].from; }

    /// Index of the segment containing t, or size() when t lies in the tail.
    std::size_t locate(const Rational& t) const;

    friend bool operator==(const StepPair& a, const StepPair& b);

  private:
    std::vector<Segment> segments_;
    Rational tail_from_ = 0;
};

Rational measure_high(const StepPair& pair);                       // lambda(H > 1/2)
Rational measure_low(const StepPair& pair);                        // lambda(L < 1/2)
Rational measure_high_at(const StepPair& pair, const Rational& y);  // lambda(H = y), y != 1/2
Rational measure_low_at(const StepPair& pair, const Rational& y);   // lambda(L = y), y != 1/2

struct LevelFailure {
    Rational level;
    Rational lhs;  // (1-y)/y * (lambda(H=y) + lambda(L=y))
    Rational rhs;  // lambda(H=1-y) + lambda(L=1-y)
};

struct LambdaReport {
    bool bounds = false;     // 0 <= L <= 1/2 <= H <= 1
    bool step = true;        // finitely many right-continuous steps
    bool budget = false;     // lambda(H>1/2) + lambda(L<1/2) <= k/2
    bool balance = false;    // level identity at every informative level
    bool no_gap_values = true;  // no H in (1/2, delta), no L in (1-delta, 1/2)
    bool gap_matches_low = true;  // {H >= L + delta} = {L < 1/2}
    Rational high_measure;
    Rational low_measure;
    std::vector<LevelFailure> balance_failures;
    std::vector<std::size_t> value_witnesses;  // segments breaking no_gap_values
    std::vector<std::size_t> gap_witnesses;    // segments breaking gap_matches_low

    bool in_lambda() const { return bounds && step && budget && balance; }
    bool in_lambda_delta() const { return in_lambda() && no_gap_values && gap_matches_low; }
};

/// Lambda(k) conditions. The level y = 1/2 is not checked: both sides carry
/// the infinite tail there.
LambdaReport lambda_membership(const StepPair& pair, long k);

/// Lambda(k) conditions plus the two threshold conditions at delta.
LambdaReport lambda_delta_membership(const StepPair& pair, const Rational& delta, long k);

/// Smallest k with lambda(H>1/2) + lambda(L<1/2) <= k/2 (at least 1).
long minimal_budget(const StepPair& pair);

/// lambda(H >= L + delta).
Rational gap_measure(const StepPair& pair, const Rational& delta);

/// Rearranges a Lambda(k) member into Lambda^delta(k) without lowering the
/// gap measure. Values of H in (1/2, delta) and of L in (1-delta, 1/2) are
/// reset to 1/2; then every segment with L = g < 1/2 and H < g + delta gets
/// L = 1/2 while H is raised from 1-g to 1 on the leftmost part of {H = 1-g}
/// of length (1-g)/g times the segment length.
StepPair reduce_to_lambda_delta(const StepPair& pair, const Rational& delta, long k);

/// lambda(L<1/2) / (lambda(H>1/2) - lambda(L<1/2)). Throws Degenerate when
/// the denominator is not positive.
Rational phi_ratio(const StepPair& pair);

/// Joins neighbouring segments with equal (H, L) and drops a trailing run of
/// (1/2, 1/2) segments into the tail.
StepPair merge_equal_neighbours(const StepPair& pair);

}  // namespace coherent
