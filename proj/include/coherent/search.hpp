#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coherent/prob.hpp"

namespace coherent {

enum class Objective { tail, expected_gap };
enum class SearchMode { enumerate, random };

struct SearchConfig {
    long n = 2;                 // agents
    std::size_t atoms = 2;      // N
    Rational delta = Rational(3, 4);
    long mass_grid_denominator = 4;  // masses are multiples of 1/D
    std::uint64_t seed = 0;
    int restarts = 1;
    Objective objective = Objective::tail;
    SearchMode mode = SearchMode::enumerate;
    std::optional<CoherentModel> planted;  // first restart starts here
};

/// Throws InvalidParameter on out-of-range fields.
void validate(const SearchConfig& config);

/// Event and one partition per agent, partitions as restricted growth
/// strings (block label of each atom, labels in order of first use).
struct Structure {
    std::size_t atoms = 0;
    std::vector<bool> event;
    std::vector<std::vector<int>> labels;  // [agent][atom]
};

struct SearchResult {
    Rational best_value;
    CoherentModel best_model;
    std::uint64_t examined = 0;
    bool violation = false;  // best_value above the proven ceiling
    int best_restart = -1;   // random mode only
};

/// Every n-tuple of set partitions, every event and every mass vector on
/// the 1/D grid. N <= 4 only. Partition tuples are sharded across threads.
SearchResult enumerate_models(const SearchConfig& config, std::ostream* progress = nullptr);

/// Same enumeration order evaluated one model at a time through
/// CoherentModel / tail_prob. Reference for enumerate_models.
SearchResult enumerate_models_serial(const SearchConfig& config);

/// Seeded restarts with steepest-ascent hill climbing over single-unit mass
/// transfers. Restarts run in parallel; ties go to the lower restart index.
SearchResult random_search(const SearchConfig& config);

/// Restarts run one after another. Reference for random_search.
SearchResult random_search_serial(const SearchConfig& config);

/// Runs the mode named in the config.
SearchResult run_search(const SearchConfig& config, std::ostream* progress = nullptr);

/// Best objective value over all mass vectors on the 1/D grid for a fixed
/// structure.
Rational best_over_masses(const Structure& structure, const Rational& delta, Objective objective,
                          long denominator);

CoherentModel structure_model(const Structure& structure, const std::vector<long>& units,
                              long denominator);

/// Number a + b sqrt(2).
struct Surd {
    Rational rational;
    Rational root2;
};

/// Exact comparison value <= ceiling.
bool at_most(const Rational& value, const Surd& ceiling);
std::string to_string(const Surd& value);
double to_double(const Surd& value);

/// Proven ceiling of E max gap: 1/2, 2 - sqrt2, 7/2 - 2 sqrt2, (n-2)/(n-1).
Surd expected_gap_ceiling(long n);

/// Ceiling that applies to the config's objective.
Surd search_ceiling(const SearchConfig& config);

struct SearchCertificate {
    Rational value;
    Surd ceiling;
    Surd slack;  // ceiling - value
    bool passed = false;
};

/// Throws InternalInvariant when the value exceeds the ceiling.
SearchCertificate certify(const SearchResult& result, const SearchConfig& config);

/// Objective re-evaluated through the model layer.
Rational objective_value(const CoherentModel& model, const Rational& delta, Objective objective);

}  // namespace coherent
