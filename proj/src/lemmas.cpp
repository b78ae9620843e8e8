#include "heet/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "heet/errors.hpp"
#include "heet/workload.hpp"

namespace heet {

namespace {

class InstanceSource {
public:
    InstanceSource(const LemmaOptions& options, std::uint64_t stream)
        : options_(options), rng_(options.seed ^ (0x9e3779b97f4a7c15ULL * stream)) {}

    std::size_t machines(std::size_t cap = SIZE_MAX) {
        const std::size_t hi = std::min(options_.max_machines, cap);
        const std::size_t lo = std::min(options_.min_machines, hi);
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    std::vector<double> times(std::size_t count) {
        std::uniform_real_distribution<double> dist(options_.min_time, options_.max_time);
        std::vector<double> out(count);
        for (auto& t : out) {
            t = dist(rng_);
        }
        return out;
    }

    std::size_t uniform(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

private:
    const LemmaOptions& options_;
    std::mt19937_64 rng_;
};

EetMatrix single_row(std::vector<double> row) {
    return EetMatrix::from_rows({std::move(row)});
}

std::string describe_row(std::span<const double> row) {
    std::ostringstream out;
    out.precision(17);
    out << '[';
    for (std::size_t j = 0; j < row.size(); ++j) {
        out << (j ? ", " : "") << row[j];
    }
    out << ']';
    return out.str();
}

void check_options(const LemmaOptions& options) {
    if (options.trials == 0 || options.tasks == 0) {
        throw DomainError("lemma checks need at least one trial and one task");
    }
    if (options.min_machines == 0 || options.min_machines > options.max_machines) {
        throw DomainError("invalid machine count range");
    }
    if (!(options.min_time > 0) || options.min_time > options.max_time) {
        throw DomainError("invalid execution time range");
    }
}

} // namespace

SaturationSample saturation_sample(const EetMatrix& eet_row, std::size_t tasks) {
    if (eet_row.tasks() != 1) {
        throw DomainError("expected a single-task-type EET matrix");
    }
    const auto alphas = row_speedups(eet_row, 0).values;
    SaturationSample s;
    s.measured = true_speedup(eet_row, uniform_bag(tasks, eet_row.task_labels().front()));
    s.arithmetic = arithmetic_mean_speedup(alphas);
    s.bound = error_bound(alphas, tasks);
    s.gap = std::abs(s.measured - s.arithmetic) / s.measured;
    return s;
}

LemmaCheck check_arithmetic_saturation(const LemmaOptions& options) {
    check_options(options);
    InstanceSource source(options, 1);
    LemmaCheck check;
    check.name = "arithmetic mean under saturation";
    double worst_ratio = 0;
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        const auto row = source.times(source.machines());
        const auto s = saturation_sample(single_row(row), options.tasks);
        ++check.instances;
        check.worst = std::max(check.worst, s.gap);
        worst_ratio = std::max(worst_ratio, s.gap / s.bound);
        if (s.gap > s.bound) {
            if (check.failures++ == 0) {
                check.detail = "first violation: row " + describe_row(row) +
                               " gap " + std::to_string(s.gap) + " > bound " +
                               std::to_string(s.bound);
            }
        }
    }
    check.passed = check.failures == 0;
    if (check.passed) {
        check.detail = "worst gap/bound ratio " + std::to_string(worst_ratio);
    }
    return check;
}

LemmaCheck check_round_robin_optimality(const LemmaOptions& options) {
    check_options(options);
    InstanceSource source(options, 2);
    LemmaCheck check;
    check.name = "round-robin optimality for bag-of-tasks";
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        const auto row = source.times(source.machines(kExhaustiveMaxMachines));
        const auto eet = single_row(row);
        for (std::size_t c = 1; c <= kExhaustiveMaxTasks; ++c) {
            const double simulated = simulate(eet, uniform_bag(c, "T1")).makespan;
            const double best = exhaustive_min_makespan(eet, c);
            ++check.instances;
            const double excess = (simulated - best) / best;
            check.worst = std::max(check.worst, excess);
            if (simulated != best) {
                if (check.failures++ == 0) {
                    std::ostringstream out;
                    out.precision(17);
                    out << "first mismatch: row " << describe_row(row) << ", " << c
                        << " tasks, round-robin " << simulated << " vs minimum " << best;
                    check.detail = out.str();
                }
            }
        }
    }
    check.passed = check.failures == 0;
    return check;
}

LemmaCheck check_one_busy_harmonic(const LemmaOptions& options) {
    check_options(options);
    InstanceSource source(options, 3);
    LemmaCheck check;
    check.name = "harmonic mean with one busy machine";
    check.tolerance = 1e-9;
    double availability_gap = 0;
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        const std::size_t n = source.machines();
        const auto eet = single_row(source.times(n));
        const std::size_t c = n * source.uniform(1, 20);
        const double measured = one_busy_regime_speedup(eet, c);
        const double harmonic = harmonic_mean_speedup(row_speedups(eet, 0).values);
        const double gap = std::abs(measured - harmonic) / harmonic;
        ++check.instances;
        check.worst = std::max(check.worst, gap);
        if (gap > check.tolerance) {
            ++check.failures;
        }
        const double by_availability = one_busy_regime_speedup(eet, c, Dispatch::lowest_free);
        availability_gap = std::max(availability_gap, std::abs(by_availability - harmonic) / harmonic);
    }
    check.passed = check.failures == 0;
    check.detail = "index-order cycling; availability-order dispatch deviates by up to " +
                   std::to_string(availability_gap);
    return check;
}

LemmaCheck check_weighted_harmonic(const LemmaOptions& options) {
    check_options(options);
    InstanceSource source(options, 4);
    LemmaCheck check;
    check.name = "weighted harmonic mean over task types";
    const std::size_t c = options.tasks;
    check.tolerance = 1.0 / static_cast<double>(c);
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        const std::size_t m = source.uniform(2, 6);
        const auto column = source.times(m);

        // Mix proportions are realised task counts, so they are multiples of 1/c.
        std::vector<std::size_t> cuts{0, c};
        for (std::size_t k = 0; k + 1 < m; ++k) {
            cuts.push_back(source.uniform(0, c));
        }
        std::sort(cuts.begin(), cuts.end());
        std::vector<double> weights(m);
        for (std::size_t i = 0; i < m; ++i) {
            weights[i] = static_cast<double>(cuts[i + 1] - cuts[i]) / static_cast<double>(c);
        }
        std::vector<std::vector<double>> rows;
        for (double e : column) {
            rows.push_back({e});
        }
        const auto eet = EetMatrix::from_rows(rows);
        const WorkloadMix mix(weights);

        const auto bag = synth_bag(c, mix, eet.task_labels(), options.seed + trial);
        const double measured = true_speedup(eet, bag);
        const double expected = harmonic_mean_speedup(col_speedups(eet, 0).values, mix);
        const double gap = std::abs(measured - expected) / expected;
        ++check.instances;
        check.worst = std::max(check.worst, gap);
        if (gap > check.tolerance) {
            ++check.failures;
        }
    }
    check.passed = check.failures == 0;
    return check;
}

std::vector<LemmaCheck> validate_lemmas(const LemmaOptions& options) {
    return {check_arithmetic_saturation(options), check_round_robin_optimality(options),
            check_one_busy_harmonic(options), check_weighted_harmonic(options)};
}

} // namespace heet
