#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "heet/eet.hpp"
#include "heet/simulator.hpp"

namespace heet {

// Randomised checks of the four speedup-aggregation results against the
// simulator. Each check draws its own instances from `seed`.
struct LemmaOptions {
    std::size_t trials = 100;
    std::size_t min_machines = 2;
    std::size_t max_machines = 6;
    double min_time = 0.5;   // seconds
    double max_time = 20.0;  // seconds
    std::size_t tasks = 1000;
    std::uint64_t seed = kDefaultSeed;
};

struct LemmaCheck {
    std::string name;
    bool passed = false;
    std::size_t instances = 0;
    std::size_t failures = 0;
    double worst = 0;       // largest observed deviation (check-specific units)
    double tolerance = 0;   // tolerance the worst case was held to, when fixed
    std::string detail;
};

// Saturated single-type bag: simulated true speedup vs arithmetic mean of the
// row speedups, within error_bound(alpha, tasks).
struct SaturationSample {
    double measured = 0;
    double arithmetic = 0;
    double bound = 0;
    double gap = 0;  // |measured - arithmetic| / measured
};
SaturationSample saturation_sample(const EetMatrix& eet_row, std::size_t tasks);

LemmaCheck check_arithmetic_saturation(const LemmaOptions& options);

// Round-robin dispatch of a single-type bag vs the exhaustive minimum, for
// every task count up to kExhaustiveMaxTasks on rows of at most
// kExhaustiveMaxMachines machines. Exact equality is required.
LemmaCheck check_round_robin_optimality(const LemmaOptions& options);

// One-busy regime speedup vs harmonic mean of the row speedups, 1e-9 relative.
LemmaCheck check_one_busy_harmonic(const LemmaOptions& options);

// Single machine, mixed-type bag: simulated speedup over the slowest type vs
// the mix-weighted harmonic mean of the column speedups, within 1/tasks relative.
LemmaCheck check_weighted_harmonic(const LemmaOptions& options);

std::vector<LemmaCheck> validate_lemmas(const LemmaOptions& options);

} // namespace heet
