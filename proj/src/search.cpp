#include "coherent/search.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <random>

#include "coherent/errors.hpp"

namespace coherent {

namespace {

constexpr long kMaxDenominator = 100000;
constexpr std::uint64_t kMaxTuples = 50'000'000;

void restricted_growth(std::vector<int>& current, std::size_t pos, int used,
                       std::vector<std::vector<int>>& out) {
    if (pos == current.size()) {
        out.push_back(current);
        return;
    }
    for (int label = 0; label <= used; ++label) {
        current[pos] = label;
        restricted_growth(current, pos + 1, std::max(used, label + 1), out);
    }
}

std::vector<std::vector<int>> set_partitions(std::size_t atoms) {
    std::vector<std::vector<int>> out;
    std::vector<int> current(atoms, 0);
    restricted_growth(current, 0, 0, out);
    return out;
}

void compose(long remaining, std::size_t pos, std::vector<long>& current,
             std::vector<std::vector<long>>& out) {
    if (pos + 1 == current.size()) {
        current[pos] = remaining;
        out.push_back(current);
        return;
    }
    for (long k = 0; k <= remaining; ++k) {
        current[pos] = k;
        compose(remaining - k, pos + 1, current, out);
    }
}

// All ways to write `total` as an ordered sum of `parts` non-negative integers.
std::vector<std::vector<long>> compositions(long total, std::size_t parts) {
    std::vector<std::vector<long>> out;
    std::vector<long> current(parts, 0);
    compose(total, 0, current, out);
    return out;
}

std::vector<int> normalize_labels(const std::vector<int>& raw) {
    std::vector<int> relabel(raw.size() + 1, -1);
    std::vector<int> out(raw.size());
    int next = 0;
    for (std::size_t a = 0; a < raw.size(); ++a) {
        int& slot = relabel[static_cast<std::size_t>(raw[a])];
        if (slot < 0) slot = next++;
        out[a] = slot;
    }
    return out;
}

using Wide = __int128;

struct Fraction {
    long num;
    long den;
};

inline bool less(const Fraction& a, const Fraction& b) {
    return static_cast<Wide>(a.num) * b.den < static_cast<Wide>(b.num) * a.den;
}

// Objective of a fixed structure as a function of integer masses (units of 1/D).
class Evaluator {
  public:
    Evaluator(const Structure& structure, const Rational& delta, Objective objective)
        : s_(structure), objective_(objective) {
        if (!delta.get_num().fits_slong_p() || !delta.get_den().fits_slong_p()) {
            throw InvalidParameter("threshold too large for the search kernel");
        }
        p_ = delta.get_num().get_si();
        q_ = delta.get_den().get_si();
        const std::size_t agents = s_.labels.size();
        blocks_.resize(agents);
        has_in_.resize(agents);
        has_out_.resize(agents);
        in_.resize(agents);
        tot_.resize(agents);
        for (std::size_t j = 0; j < agents; ++j) {
            int count = 0;
            for (int label : s_.labels[j]) count = std::max(count, label + 1);
            blocks_[j] = count;
            has_in_[j].assign(count, false);
            has_out_[j].assign(count, false);
            in_[j].assign(count, 0);
            tot_[j].assign(count, 0);
            for (std::size_t a = 0; a < s_.atoms; ++a) {
                (s_.event[a] ? has_in_[j] : has_out_[j])[s_.labels[j][a]] = true;
            }
        }
        opinion_.resize(agents);
    }

    Rational operator()(const std::vector<long>& units, long denominator) {
        const std::size_t agents = s_.labels.size();
        for (std::size_t j = 0; j < agents; ++j) {
            std::fill(in_[j].begin(), in_[j].end(), 0);
            std::fill(tot_[j].begin(), tot_[j].end(), 0);
            for (std::size_t a = 0; a < s_.atoms; ++a) {
                const int b = s_.labels[j][a];
                tot_[j][b] += units[a];
                if (s_.event[a]) in_[j][b] += units[a];
            }
        }
        long tail_units = 0;
        Rational gap_sum = 0;
        for (std::size_t a = 0; a < s_.atoms; ++a) {
            if (units[a] == 0) continue;
            for (std::size_t j = 0; j < agents; ++j) {
                const int b = s_.labels[j][a];
                if (tot_[j][b] > 0) {
                    opinion_[j] = {in_[j][b], tot_[j][b]};
                } else if (!has_out_[j][b]) {
                    opinion_[j] = {1, 1};
                } else if (!has_in_[j][b]) {
                    opinion_[j] = {0, 1};
                } else {
                    opinion_[j] = {1, 2};
                }
            }
            Fraction hi = opinion_[0];
            Fraction lo = opinion_[0];
            for (std::size_t j = 1; j < agents; ++j) {
                if (less(hi, opinion_[j])) hi = opinion_[j];
                if (less(opinion_[j], lo)) lo = opinion_[j];
            }
            const Wide gap_num = static_cast<Wide>(hi.num) * lo.den - static_cast<Wide>(lo.num) * hi.den;
            const Wide gap_den = static_cast<Wide>(hi.den) * lo.den;
            if (objective_ == Objective::tail) {
                if (gap_num * q_ >= gap_den * p_) tail_units += units[a];
            } else if (gap_num != 0) {
                gap_sum += ratio(static_cast<long>(gap_num) * units[a], static_cast<long>(gap_den));
            }
        }
        if (objective_ == Objective::tail) return ratio(tail_units, denominator);
        return gap_sum / denominator;
    }

  private:
    const Structure& s_;
    Objective objective_;
    long p_ = 0;
    long q_ = 1;
    std::vector<int> blocks_;
    std::vector<std::vector<bool>> has_in_;
    std::vector<std::vector<bool>> has_out_;
    std::vector<std::vector<long>> in_;
    std::vector<std::vector<long>> tot_;
    std::vector<Fraction> opinion_;
};

Structure structure_from_tuple(std::uint64_t tuple, std::uint32_t event_mask, std::size_t atoms,
                               long agents, const std::vector<std::vector<int>>& parts) {
    Structure s;
    s.atoms = atoms;
    s.event.resize(atoms);
    for (std::size_t a = 0; a < atoms; ++a) s.event[a] = (event_mask >> a) & 1U;
    const std::uint64_t base = parts.size();
    for (long j = 0; j < agents; ++j) {
        s.labels.push_back(parts[tuple % base]);
        tuple /= base;
    }
    return s;
}

std::uint64_t tuple_count(std::size_t partitions, long agents) {
    std::uint64_t total = 1;
    for (long j = 0; j < agents; ++j) {
        total *= partitions;
        if (total > kMaxTuples) {
            throw InvalidParameter("exhaustive enumeration too large: reduce agents or atoms");
        }
    }
    return total;
}

struct Candidate {
    Rational value;
    bool set = false;
    std::uint64_t tuple = 0;
    std::uint32_t event = 0;
    std::size_t masses = 0;
};

void prepare_enumeration(const SearchConfig& config) {
    validate(config);
    if (config.atoms > 4) {
        throw InvalidParameter("exhaustive enumeration is limited to N <= 4 atoms (got " +
                               std::to_string(config.atoms) + ")");
    }
}

SearchResult finish(const SearchConfig& config, const Structure& s, const std::vector<long>& units,
                    Rational value, std::uint64_t examined, int restart) {
    CoherentModel model = structure_model(s, units, config.mass_grid_denominator);
    if (objective_value(model, config.delta, config.objective) != value) {
        throw InternalInvariant("search kernel disagrees with the model layer");
    }
    SearchResult result{std::move(value), std::move(model), examined, false, restart};
    result.violation = !at_most(result.best_value, search_ceiling(config));
    return result;
}

Structure structure_from_model(const CoherentModel& model) {
    Structure s;
    s.atoms = model.atoms();
    s.event.resize(s.atoms);
    for (std::size_t a = 0; a < s.atoms; ++a) s.event[a] = model.in_event(a);
    for (const auto& p : model.partitions()) {
        std::vector<int> raw(s.atoms);
        for (std::size_t a = 0; a < s.atoms; ++a) raw[a] = static_cast<int>(p.block_of(a));
        s.labels.push_back(normalize_labels(raw));
    }
    return s;
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

struct RestartOutcome {
    Rational value;
    Structure structure;
    std::vector<long> units;
    std::uint64_t evaluations = 0;
};

RestartOutcome run_restart(const SearchConfig& config, int restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    const long D = config.mass_grid_denominator;
    const std::size_t atoms = config.atoms;

    RestartOutcome out;
    if (restart == 0 && config.planted) {
        out.structure = structure_from_model(*config.planted);
        for (std::size_t a = 0; a < atoms; ++a) {
            const Rational scaled = config.planted->space().mass(a) * D;
            if (scaled.get_den() != 1) {
                throw InvalidParameter("planted masses are not multiples of 1/" + std::to_string(D));
            }
            out.units.push_back(scaled.get_num().get_si());
        }
    } else {
        out.structure.atoms = atoms;
        out.structure.event.resize(atoms);
        for (std::size_t a = 0; a < atoms; ++a) out.structure.event[a] = draw(rng, 2) == 1;
        for (long j = 0; j < config.n; ++j) {
            std::vector<int> raw(atoms);
            for (auto& label : raw) label = static_cast<int>(draw(rng, atoms));
            out.structure.labels.push_back(normalize_labels(raw));
        }
        out.units.assign(atoms, 0);
        for (long u = 0; u < D; ++u) ++out.units[draw(rng, atoms)];
    }

    Evaluator evaluate(out.structure, config.delta, config.objective);
    out.value = evaluate(out.units, D);
    out.evaluations = 1;
    const long max_steps = 4 * D * static_cast<long>(atoms) + 4;
    for (long step = 0; step < max_steps; ++step) {
        Rational best = out.value;
        std::size_t from = atoms;
        std::size_t to = atoms;
        for (std::size_t i = 0; i < atoms; ++i) {
            if (out.units[i] == 0) continue;
            for (std::size_t j = 0; j < atoms; ++j) {
                if (i == j) continue;
                --out.units[i];
                ++out.units[j];
                Rational v = evaluate(out.units, D);
                ++out.evaluations;
                ++out.units[i];
                --out.units[j];
                if (v > best) {
                    best = std::move(v);
                    from = i;
                    to = j;
                }
            }
        }
        if (from == atoms) break;
        --out.units[from];
        ++out.units[to];
        out.value = std::move(best);
    }
    return out;
}

SearchResult merge_restarts(const SearchConfig& config, std::vector<RestartOutcome>& outcomes) {
    std::size_t best = 0;
    std::uint64_t examined = 0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        examined += outcomes[r].evaluations;
        if (outcomes[r].value > outcomes[best].value) best = r;
    }
    const auto& win = outcomes[best];
    return finish(config, win.structure, win.units, win.value, examined, static_cast<int>(best));
}

void prepare_random(const SearchConfig& config) {
    validate(config);
    if (config.restarts < 1) throw InvalidParameter("random search needs at least one restart");
}

}  // namespace

void validate(const SearchConfig& config) {
    if (config.n < 2) throw InvalidParameter("search needs n >= 2 agents");
    if (config.atoms < 1) throw InvalidParameter("search needs at least one atom");
    if (config.atoms > 64) throw InvalidParameter("search supports at most 64 atoms");
    require_threshold(config.delta);
    if (config.mass_grid_denominator < 2 || config.mass_grid_denominator > kMaxDenominator) {
        throw InvalidParameter("mass grid denominator must lie in [2, " +
                               std::to_string(kMaxDenominator) + "]");
    }
    if (config.mode == SearchMode::random && config.restarts < 1) {
        throw InvalidParameter("random search needs at least one restart");
    }
    if (config.planted) {
        if (config.planted->atoms() != config.atoms ||
            static_cast<long>(config.planted->agents()) != config.n) {
            throw InvalidParameter("planted model does not match n and atom count");
        }
    }
}

CoherentModel structure_model(const Structure& structure, const std::vector<long>& units,
                              long denominator) {
    std::vector<Rational> masses;
    for (long u : units) masses.push_back(ratio(u, denominator));
    AtomSet event;
    for (std::size_t a = 0; a < structure.atoms; ++a) {
        if (structure.event[a]) event.push_back(a);
    }
    std::vector<Partition> partitions;
    for (const auto& labels : structure.labels) {
        int count = 0;
        for (int l : labels) count = std::max(count, l + 1);
        std::vector<AtomSet> blocks(static_cast<std::size_t>(count));
        for (std::size_t a = 0; a < structure.atoms; ++a) blocks[labels[a]].push_back(a);
        partitions.emplace_back(std::move(blocks), structure.atoms);
    }
    return CoherentModel(FiniteSpace(std::move(masses)), std::move(event), std::move(partitions));
}

Rational objective_value(const CoherentModel& model, const Rational& delta, Objective objective) {
    return objective == Objective::tail ? tail_prob(model, delta) : expected_max_gap(model);
}

Rational best_over_masses(const Structure& structure, const Rational& delta, Objective objective,
                          long denominator) {
    Evaluator evaluate(structure, delta, objective);
    Rational best = 0;
    for (const auto& units : compositions(denominator, structure.atoms)) {
        Rational v = evaluate(units, denominator);
        if (v > best) best = std::move(v);
    }
    return best;
}

SearchResult enumerate_models(const SearchConfig& config, std::ostream* progress) {
    prepare_enumeration(config);
    const auto parts = set_partitions(config.atoms);
    const std::uint64_t tuples = tuple_count(parts.size(), config.n);
    const auto masses = compositions(config.mass_grid_denominator, config.atoms);
    const std::uint32_t events = 1U << config.atoms;

    std::vector<Candidate> per_tuple(tuples);
    const std::uint64_t chunk = 256;
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t first = 0; first < tuples; first += chunk) {
        const long last = static_cast<long>(std::min(tuples, first + chunk));
#pragma omp parallel for schedule(dynamic)
        for (long t = static_cast<long>(first); t < last; ++t) {
            Candidate& best = per_tuple[t];
            for (std::uint32_t ev = 0; ev < events; ++ev) {
                const Structure s =
                    structure_from_tuple(static_cast<std::uint64_t>(t), ev, config.atoms, config.n, parts);
                Evaluator evaluate(s, config.delta, config.objective);
                for (std::size_t m = 0; m < masses.size(); ++m) {
                    Rational v = evaluate(masses[m], config.mass_grid_denominator);
                    if (!best.set || v > best.value) {
                        best = {std::move(v), true, static_cast<std::uint64_t>(t), ev, m};
                    }
                }
            }
        }
        if (progress != nullptr) {
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const double done = static_cast<double>(last) * events * masses.size();
            *progress << "enumerate: " << last << "/" << tuples << " partition tuples, "
                      << static_cast<long>(secs > 0 ? done / secs : done) << " structures/s\n";
        }
    }

    std::size_t win = 0;
    for (std::size_t t = 1; t < per_tuple.size(); ++t) {
        if (per_tuple[t].value > per_tuple[win].value) win = t;
    }
    const Candidate& c = per_tuple[win];
    const Structure s = structure_from_tuple(c.tuple, c.event, config.atoms, config.n, parts);
    return finish(config, s, masses[c.masses], c.value, tuples * events * masses.size(), -1);
}

SearchResult enumerate_models_serial(const SearchConfig& config) {
    prepare_enumeration(config);
    const auto parts = set_partitions(config.atoms);
    const std::uint64_t tuples = tuple_count(parts.size(), config.n);
    const auto masses = compositions(config.mass_grid_denominator, config.atoms);
    const std::uint32_t events = 1U << config.atoms;

    Candidate best;
    std::uint64_t examined = 0;
    for (std::uint64_t t = 0; t < tuples; ++t) {
        for (std::uint32_t ev = 0; ev < events; ++ev) {
            const Structure s = structure_from_tuple(t, ev, config.atoms, config.n, parts);
            for (std::size_t m = 0; m < masses.size(); ++m) {
                const CoherentModel model = structure_model(s, masses[m], config.mass_grid_denominator);
                Rational v = objective_value(model, config.delta, config.objective);
                ++examined;
                if (!best.set || v > best.value) best = {std::move(v), true, t, ev, m};
            }
        }
    }
    const Structure s = structure_from_tuple(best.tuple, best.event, config.atoms, config.n, parts);
    return finish(config, s, masses[best.masses], best.value, examined, -1);
}

SearchResult random_search(const SearchConfig& config) {
    prepare_random(config);
    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < config.restarts; ++r) {
        try {
            outcomes[r] = run_restart(config, r);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return merge_restarts(config, outcomes);
}

SearchResult random_search_serial(const SearchConfig& config) {
    prepare_random(config);
    std::vector<RestartOutcome> outcomes;
    for (int r = 0; r < config.restarts; ++r) outcomes.push_back(run_restart(config, r));
    return merge_restarts(config, outcomes);
}

SearchResult run_search(const SearchConfig& config, std::ostream* progress) {
    return config.mode == SearchMode::enumerate ? enumerate_models(config, progress)
                                                : random_search(config);
}

bool at_most(const Rational& value, const Surd& ceiling) {
    const Rational d = value - ceiling.rational;
    const Rational& b = ceiling.root2;
    if (b >= 0) return d <= 0 || d * d <= 2 * b * b;
    return d < 0 && d * d >= 2 * b * b;
}

std::string to_string(const Surd& value) {
    if (value.root2 == 0) return to_string(value.rational);
    std::string out = value.rational == 0 ? "" : to_string(value.rational);
    const Rational coef = abs(value.root2);
    const std::string term = coef == 1 ? "sqrt(2)" : to_string(coef) + "*sqrt(2)";
    if (value.root2 > 0) {
        out += out.empty() ? term : "+" + term;
    } else {
        out += "-" + term;
    }
    return out;
}

double to_double(const Surd& value) {
    return value.rational.get_d() + value.root2.get_d() * std::sqrt(2.0);
}

Surd expected_gap_ceiling(long n) {
    if (n < 2) throw InvalidParameter("number of agents must be at least 2");
    switch (n) {
        case 2: return {Rational(1, 2), 0};
        case 3: return {2, -1};
        case 4: return {Rational(7, 2), -2};
        default: return {ratio(n - 2, n - 1), 0};
    }
}

Surd search_ceiling(const SearchConfig& config) {
    if (config.objective == Objective::tail) return {bound_formula(config.n, config.delta), 0};
    return expected_gap_ceiling(config.n);
}

SearchCertificate certify(const SearchResult& result, const SearchConfig& config) {
    SearchCertificate cert;
    cert.value = result.best_value;
    cert.ceiling = search_ceiling(config);
    cert.slack = {cert.ceiling.rational - cert.value, cert.ceiling.root2};
    cert.passed = at_most(cert.value, cert.ceiling);
    if (!cert.passed) {
        throw InternalInvariant("search value " + to_string(cert.value) +
                                " exceeds the proven ceiling " + to_string(cert.ceiling));
    }
    return cert;
}

}  // namespace coherent
