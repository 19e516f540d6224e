#include "coherent/bellman.hpp"

#include <algorithm>
#include <set>

#include "coherent/errors.hpp"
#include "coherent/prob.hpp"

namespace coherent {

namespace {

void require_point(const Rational& x, const Rational& delta) {
    require_threshold(delta);
    if (x < delta || x > 1) {
        throw InvalidParameter("point " + to_string(x) + " outside [" + to_string(delta) + ", 1]");
    }
}

void require_grid(const Rational& delta, const Rational& step, int horizon) {
    require_threshold(delta);
    if (!(step > 0 && step <= Rational(1, 100))) {
        throw InvalidParameter("grid step must lie in (0, 1/100]");
    }
    if (horizon < 0) throw InvalidParameter("horizon must be non-negative");
}

Rational one_step_factor(const Rational& x) { return (1 - x) / x; }

}  // namespace

Rational psi(const Rational& x, const Rational& delta) {
    require_point(x, delta);
    return (1 - x) / delta;
}

Rational alternating_value(const Rational& x, const Rational& delta, int terms) {
    require_point(x, delta);
    if (terms < 0) throw InvalidParameter("number of terms must be non-negative");
    const Rational even = one_step_factor(x);
    const Rational odd = one_step_factor(1 - x + delta);
    Rational product = 1;
    Rational sum = 0;
    for (int n = 0; n <= terms; ++n) {
        product *= (n % 2 == 0) ? even : odd;
        if (product == 0) break;
        sum += product;
    }
    return sum;
}

RecurrenceReport verify_recurrence(const Rational& delta, const std::vector<Rational>& samples) {
    require_threshold(delta);
    RecurrenceReport report;
    std::set<Rational> points(samples.begin(), samples.end());
    for (const auto& x : samples) {
        require_point(x, delta);
        const Rational image = 1 - x + delta;
        if (psi(x, delta) != one_step_factor(x) * (1 + psi(image, delta))) {
            report.identity_failures.push_back(x);
        }
        const Rational at_boundary = psi(image, delta);
        for (auto it = points.lower_bound(image); it != points.end(); ++it) {
            if (psi(*it, delta) > at_boundary) {
                report.argmax_failures.push_back(x);
                break;
            }
        }
    }
    report.identity = report.identity_failures.empty();
    report.boundary_argmax = report.argmax_failures.empty();
    return report;
}

std::vector<Rational> bellman_grid(const Rational& delta, const Rational& step) {
    require_grid(delta, step, 0);
    std::set<Rational> points{delta, Rational(1)};
    for (Rational x = delta; x <= 1; x += step) points.insert(x);
    for (Rational x = 1; x >= delta; x -= step) points.insert(x);
    return {points.begin(), points.end()};
}

namespace {

BellmanTable make_table(const Rational& delta, const Rational& step) {
    BellmanTable table;
    table.delta = delta;
    table.step = step;
    table.grid = bellman_grid(delta, step);
    table.values.emplace_back(table.grid.size(), Rational(0));
    return table;
}

}  // namespace

BellmanTable dp_upper(const Rational& delta, const Rational& step, int horizon) {
    require_grid(delta, step, horizon);
    BellmanTable table = make_table(delta, step);
    const auto& grid = table.grid;
    const long size = static_cast<long>(grid.size());

    std::vector<std::size_t> target(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Rational image = 1 - grid[i] + delta;
        target[i] = static_cast<std::size_t>(
            std::lower_bound(grid.begin(), grid.end(), image) - grid.begin());
    }

    std::vector<Rational> suffix(grid.size());
    for (int k = 0; k < horizon; ++k) {
        const auto& prev = table.values.back();
        suffix.back() = prev.back();
        for (long i = size - 2; i >= 0; --i) {
            suffix[i] = max(prev[i], suffix[i + 1]);
        }
        std::vector<Rational> next(grid.size());
#pragma omp parallel for schedule(static)
        for (long i = 0; i < size; ++i) {
            const std::size_t t = target[i];
            const Rational best = t < grid.size() ? suffix[t] : Rational(0);
            next[i] = one_step_factor(grid[i]) * (1 + best);
        }
        table.values.push_back(std::move(next));
    }
    return table;
}

BellmanTable dp_upper_serial(const Rational& delta, const Rational& step, int horizon) {
    require_grid(delta, step, horizon);
    BellmanTable table = make_table(delta, step);
    const auto& grid = table.grid;
    for (int k = 0; k < horizon; ++k) {
        const auto& prev = table.values.back();
        std::vector<Rational> next(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Rational image = 1 - grid[i] + delta;
            Rational best = 0;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                if (grid[j] >= image && prev[j] > best) best = prev[j];
            }
            next[i] = one_step_factor(grid[i]) * (1 + best);
        }
        table.values.push_back(std::move(next));
    }
    return table;
}

TableCheck check_table(const BellmanTable& table) {
    TableCheck check;
    check.below_candidate = true;
    check.monotone = true;
    check.max_deficiency = 0;
    check.worst_point = table.grid.front();
    bool first = true;
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
        const Rational ceiling = psi(table.grid[i], table.delta);
        for (std::size_t k = 0; k < table.values.size(); ++k) {
            if (table.values[k][i] > ceiling) check.below_candidate = false;
            if (k + 1 < table.values.size() && table.values[k + 1][i] < table.values[k][i]) {
                check.monotone = false;
            }
        }
        const Rational deficiency = ceiling - table.last()[i];
        if (first || deficiency > check.max_deficiency) {
            check.max_deficiency = deficiency;
            check.worst_point = table.grid[i];
            first = false;
        }
    }
    return check;
}

Rational phi_supremum(const Rational& delta) {
    require_threshold(delta);
    return (1 - delta) / delta;
}

Rational recombined_bound(long n, const Rational& phi) {
    if (n < 2) throw InvalidParameter("number of agents must be at least 2");
    if (phi < 0) throw InvalidParameter("ratio must be non-negative");
    // lambda(L<1/2) <= c lambda(H>1/2) with c = phi/(1+phi); with the budget
    // n/2 this caps lambda(L<1/2) at (n/2) c/(1+c).
    const Rational c = phi / (1 + phi);
    return 2 * (Rational(n) / 2) * (c / (1 + c));
}

}  // namespace coherent
