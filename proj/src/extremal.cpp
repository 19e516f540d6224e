#include "coherent/extremal.hpp"

#include "coherent/errors.hpp"

namespace coherent {

ExtremalSpec extremal_spec(long n, const Rational& delta) {
    if (n < 2) throw InvalidParameter("extremal model needs n >= 2");
    require_threshold(delta);
    ExtremalSpec spec;
    spec.n = n;
    spec.delta = delta;
    const Rational floor_delta = ratio(n - 2, n - 1);
    spec.delta_eff = max(delta, floor_delta);
    const Rational& d = spec.delta_eff;
    spec.side_mass = half() * (1 - d) / (2 - d);
    spec.core_mass = half() * (1 - Rational(n) * (1 - d) / (2 - d));
    return spec;
}

CoherentModel build_extremal(long n, const Rational& delta) {
    const ExtremalSpec spec = extremal_spec(n, delta);
    const std::size_t atoms = static_cast<std::size_t>(2 * n + 2);

    std::vector<Rational> masses(atoms, spec.side_mass);
    masses[spec.a(0)] = spec.core_mass;
    masses[spec.b(0)] = spec.core_mass;

    AtomSet event;
    for (long i = 0; i <= n; ++i) event.push_back(spec.a(i));

    std::vector<Partition> partitions;
    for (long i = 1; i <= n; ++i) {
        const long next = i == n ? 1 : i + 1;
        AtomSet upper;  // (A u B_next) \ (A_i u A_next)
        AtomSet lower;  // (B u A_next) \ (B_i u B_next)
        for (long k = 0; k <= n; ++k) {
            if (k != i && k != next) upper.push_back(spec.a(k));
        }
        upper.push_back(spec.b(next));
        for (long k = 0; k <= n; ++k) {
            if (k != i && k != next) lower.push_back(spec.b(k));
        }
        lower.push_back(spec.a(next));
        partitions.emplace_back(
            std::vector<AtomSet>{{spec.a(i)}, {spec.b(i)}, std::move(upper), std::move(lower)},
            atoms);
    }
    return CoherentModel(FiniteSpace(std::move(masses)), std::move(event), std::move(partitions));
}

ExtremalCertificate certify_extremal(long n, const Rational& delta) {
    ExtremalSpec spec = extremal_spec(n, delta);
    CoherentModel model = build_extremal(n, delta);
    Rational tail = tail_prob(model, delta);
    Rational bound = bound_formula(n, delta);
    const bool attained = tail == bound;
    return {std::move(spec), std::move(model), std::move(tail), std::move(bound), attained};
}

}  // namespace coherent
