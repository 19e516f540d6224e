#include "coherent/steppair.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "coherent/errors.hpp"
#include "coherent/prob.hpp"

namespace coherent {

StepPair::StepPair(std::vector<Segment> segments, Rational tail_from)
    : segments_(std::move(segments)), tail_from_(std::move(tail_from)) {
    if (segments_.empty()) {
        if (tail_from_ != 0) throw InvalidParameter("empty step pair must have its tail at 0");
        return;
    }
    if (segments_.front().from != 0) throw InvalidParameter("first breakpoint must be 0");
    for (std::size_t s = 0; s < segments_.size(); ++s) {
        if (!(segments_[s].from < end_of(s))) {
            throw InvalidParameter("breakpoints must be strictly increasing");
        }
        const auto& seg = segments_[s];
        if (!(seg.low >= 0 && seg.low <= half() && seg.high >= half() && seg.high <= 1)) {
            throw InvalidParameter("segment " + std::to_string(s) +
                                   " violates 0 <= L <= 1/2 <= H <= 1");
        }
    }
}

std::size_t StepPair::locate(const Rational& t) const {
    if (t < 0) throw InvalidParameter("negative abscissa");
    if (t >= tail_from_) return segments_.size();
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](const Rational& v, const Segment& s) { return v < s.from; });
    return static_cast<std::size_t>(it - segments_.begin()) - 1;
}

bool operator==(const StepPair& a, const StepPair& b) {
    if (a.tail_from_ != b.tail_from_ || a.segments_.size() != b.segments_.size()) return false;
    for (std::size_t s = 0; s < a.segments_.size(); ++s) {
        const auto& x = a.segments_[s];
        const auto& y = b.segments_[s];
        if (x.from != y.from || x.high != y.high || x.low != y.low) return false;
    }
    return true;
}

Rational measure_high(const StepPair& pair) {
    Rational total = 0;
    for (std::size_t s = 0; s < pair.size(); ++s) {
        if (pair.segments()[s].high > half()) total += pair.length(s);
    }
    return total;
}

Rational measure_low(const StepPair& pair) {
    Rational total = 0;
    for (std::size_t s = 0; s < pair.size(); ++s) {
        if (pair.segments()[s].low < half()) total += pair.length(s);
    }
    return total;
}

Rational measure_high_at(const StepPair& pair, const Rational& y) {
    if (y == half()) throw InvalidParameter("lambda(H = 1/2) is infinite");
    Rational total = 0;
    for (std::size_t s = 0; s < pair.size(); ++s) {
        if (pair.segments()[s].high == y) total += pair.length(s);
    }
    return total;
}

Rational measure_low_at(const StepPair& pair, const Rational& y) {
    if (y == half()) throw InvalidParameter("lambda(L = 1/2) is infinite");
    Rational total = 0;
    for (std::size_t s = 0; s < pair.size(); ++s) {
        if (pair.segments()[s].low == y) total += pair.length(s);
    }
    return total;
}

LambdaReport lambda_membership(const StepPair& pair, long k) {
    LambdaReport report;
    report.bounds = true;  // enforced by the StepPair constructor
    report.step = true;
    report.high_measure = measure_high(pair);
    report.low_measure = measure_low(pair);
    report.budget = report.high_measure + report.low_measure <= ratio(k, 2);

    // level -> lambda(H = level) + lambda(L = level), half excluded
    std::map<Rational, Rational> level_measure;
    std::set<Rational> levels;
    auto note = [&](const Rational& v, const Rational& len) {
        if (v == half()) return;
        level_measure[v] += len;
        if (v > 0) levels.insert(v);
        if (1 - v > 0) levels.insert(1 - v);
    };
    for (std::size_t s = 0; s < pair.size(); ++s) {
        const Rational len = pair.length(s);
        note(pair.segments()[s].high, len);
        note(pair.segments()[s].low, len);
    }
    auto at = [&](const Rational& v) {
        auto it = level_measure.find(v);
        return it == level_measure.end() ? Rational(0) : it->second;
    };
    for (const auto& y : levels) {
        Rational lhs = (1 - y) / y * at(y);
        Rational rhs = at(1 - y);
        if (lhs != rhs) report.balance_failures.push_back({y, lhs, rhs});
    }
    report.balance = report.balance_failures.empty();
    return report;
}

LambdaReport lambda_delta_membership(const StepPair& pair, const Rational& delta, long k) {
    require_threshold(delta);
    LambdaReport report = lambda_membership(pair, k);
    for (std::size_t s = 0; s < pair.size(); ++s) {
        const auto& seg = pair.segments()[s];
        const bool bad_high = seg.high > half() && seg.high < delta;
        const bool bad_low = seg.low > 1 - delta && seg.low < half();
        if (bad_high || bad_low) report.value_witnesses.push_back(s);
        const bool gap = seg.high >= seg.low + delta;
        const bool low = seg.low < half();
        if (gap != low) report.gap_witnesses.push_back(s);
    }
    report.no_gap_values = report.value_witnesses.empty();
    report.gap_matches_low = report.gap_witnesses.empty();
    return report;
}

long minimal_budget(const StepPair& pair) {
    const Integer k = ceil(2 * (measure_high(pair) + measure_low(pair)));
    return std::max(1L, k.get_si());
}

Rational gap_measure(const StepPair& pair, const Rational& delta) {
    require_threshold(delta);
    Rational total = 0;
    for (std::size_t s = 0; s < pair.size(); ++s) {
        const auto& seg = pair.segments()[s];
        if (seg.high >= seg.low + delta) total += pair.length(s);
    }
    return total;
}

StepPair merge_equal_neighbours(const StepPair& pair) {
    std::vector<Segment> out;
    for (const auto& seg : pair.segments()) {
        if (!out.empty() && out.back().high == seg.high && out.back().low == seg.low) continue;
        out.push_back(seg);
    }
    Rational tail = pair.tail_from();
    while (!out.empty() && out.back().high == half() && out.back().low == half()) {
        tail = out.back().from;
        out.pop_back();
    }
    return StepPair(std::move(out), std::move(tail));
}

namespace {

struct Working {
    std::vector<Segment> segs;
    Rational tail;

    Rational end_of(std::size_t s) const { return s + 1 < segs.size() ? segs[s + 1].from : tail; }
};

bool clip_step(Working& w, const Rational& delta) {
    bool changed = false;
    for (auto& seg : w.segs) {
        if (seg.high > half() && seg.high < delta) {
            seg.high = half();
            changed = true;
        }
        if (seg.low > 1 - delta && seg.low < half()) {
            seg.low = half();
            changed = true;
        }
    }
    return changed;
}

// Returns false when no segment violates {H >= L + delta} = {L < 1/2}.
bool lift_step(Working& w, const Rational& delta) {
    std::size_t target = w.segs.size();
    for (std::size_t s = 0; s < w.segs.size(); ++s) {
        const auto& seg = w.segs[s];
        if (seg.low < half() && seg.high < seg.low + delta) {
            target = s;
            break;
        }
    }
    if (target == w.segs.size()) return false;

    const Rational gamma = w.segs[target].low;
    if (gamma <= 0) throw InternalInvariant("lift step met L = 0 on a set of positive measure");
    const Rational source = 1 - gamma;
    Rational remaining = source / gamma * (w.end_of(target) - w.segs[target].from);
    w.segs[target].low = half();

    std::vector<Segment> out;
    out.reserve(w.segs.size() + 1);
    for (std::size_t s = 0; s < w.segs.size(); ++s) {
        Segment seg = w.segs[s];
        if (remaining > 0 && seg.high == source) {
            const Rational len = w.end_of(s) - seg.from;
            if (len <= remaining) {
                remaining -= len;
                seg.high = 1;
                out.push_back(seg);
            } else {
                Segment lifted = seg;
                lifted.high = 1;
                out.push_back(lifted);
                seg.from += remaining;
                remaining = 0;
                out.push_back(seg);
            }
            continue;
        }
        out.push_back(seg);
    }
    if (remaining > 0) {
        throw InternalInvariant("level {H = " + to_string(source) +
                                "} too small for the lift step; balance identity broken");
    }
    w.segs = std::move(out);
    return true;
}

}  // namespace

StepPair reduce_to_lambda_delta(const StepPair& pair, const Rational& delta, long k) {
    require_threshold(delta);
    const LambdaReport pre = lambda_membership(pair, k);
    if (!pre.in_lambda()) throw NotInLambda("input pair is not a Lambda(k) member");

    std::set<Rational> low_levels;
    for (const auto& seg : pair.segments()) low_levels.insert(seg.low);
    const std::size_t cap =
        10 * std::max<std::size_t>(1, pair.size()) * std::max<std::size_t>(1, low_levels.size());

    Working w{pair.segments(), pair.tail_from()};
    bool transformed = false;
    for (std::size_t iter = 0;; ++iter) {
        if (iter > cap) throw InternalInvariant("rearrangement did not reach a fixpoint");
        const bool clipped = clip_step(w, delta);
        const bool lifted = lift_step(w, delta);
        if (clipped || lifted) {
            transformed = true;
            StepPair merged = merge_equal_neighbours(StepPair(w.segs, w.tail));
            w = Working{merged.segments(), merged.tail_from()};
        }
        if (!lifted) break;
    }
    if (!transformed) return pair;
    return StepPair(std::move(w.segs), std::move(w.tail));
}

Rational phi_ratio(const StepPair& pair) {
    const Rational high = measure_high(pair);
    const Rational low = measure_low(pair);
    if (high - low <= 0) {
        throw Degenerate("phi ratio needs lambda(H > 1/2) > lambda(L < 1/2)");
    }
    return low / (high - low);
}

}  // namespace coherent
