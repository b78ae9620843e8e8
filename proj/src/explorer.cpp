#include "heet/explorer.hpp"

#include <cmath>
#include <exception>
#include <numeric>
#include <unordered_set>

#include "heet/errors.hpp"
#include "heet/workload.hpp"

namespace heet {

MachineCatalog::MachineCatalog(std::vector<std::string> task_labels, std::vector<MachineType> types)
    : task_labels_(std::move(task_labels)), types_(std::move(types)) {
    if (types_.empty()) {
        throw DomainError("machine catalog is empty");
    }
    if (task_labels_.empty()) {
        throw DomainError("machine catalog has no task types");
    }
    bool any_available = false;
    for (const auto& type : types_) {
        if (type.label.empty()) {
            throw DomainError("machine type with an empty label");
        }
        if (!std::isfinite(type.unit_cost) || type.unit_cost < 0) {
            throw DomainError("machine type '" + type.label + "' has a negative cost");
        }
        if (type.eet_column.size() != task_labels_.size()) {
            throw DomainError("machine type '" + type.label + "' has " +
                              std::to_string(type.eet_column.size()) + " execution times for " +
                              std::to_string(task_labels_.size()) + " task types");
        }
        for (double e : type.eet_column) {
            if (!std::isfinite(e) || e <= 0) {
                throw DomainError("machine type '" + type.label +
                                  "' has a non-positive execution time");
            }
        }
        any_available = any_available || type.max_count > 0;
    }
    if (!any_available) {
        throw DomainError("every machine type has max_count 0");
    }
    std::unordered_set<std::string> seen;
    for (const auto& type : types_) {
        if (!seen.insert(type.label).second) {
            throw DomainError("duplicate machine type '" + type.label + "'");
        }
    }
}

std::size_t MachineCatalog::config_count() const {
    std::size_t product = 1;
    for (const auto& type : types_) {
        product *= type.max_count + 1;
    }
    return product - 1;
}

std::size_t SystemConfig::machines() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

namespace {

void check_config(const MachineCatalog& catalog, const SystemConfig& config) {
    if (config.counts.size() != catalog.size()) {
        throw DomainError("configuration has " + std::to_string(config.counts.size()) +
                          " counts for " + std::to_string(catalog.size()) + " machine types");
    }
    for (std::size_t t = 0; t < catalog.size(); ++t) {
        if (config.counts[t] > catalog.types()[t].max_count) {
            throw DomainError("configuration exceeds max_count for '" +
                              catalog.types()[t].label + "'");
        }
    }
    if (config.machines() == 0) {
        throw DomainError("configuration has no machines");
    }
}

void check_spec(const MachineCatalog& catalog, const SweepSpec& spec) {
    if (!(spec.target_throughput > 0) || !std::isfinite(spec.target_throughput)) {
        throw DomainError("target throughput must be positive");
    }
    if (spec.tasks == 0) {
        throw DomainError("task count must be at least 1");
    }
    if (spec.mix.size() != catalog.task_labels().size()) {
        throw DomainError("workload mix does not match the catalog's task types");
    }
}

} // namespace

EetMatrix expand_config(const MachineCatalog& catalog, const SystemConfig& config) {
    check_config(catalog, config);
    const std::size_t m = catalog.task_labels().size();
    const std::size_t n = config.machines();

    std::vector<std::string> labels;
    labels.reserve(n);
    std::vector<double> entries(m * n);
    std::size_t column = 0;
    for (std::size_t t = 0; t < catalog.size(); ++t) {
        const auto& type = catalog.types()[t];
        for (std::size_t k = 0; k < config.counts[t]; ++k, ++column) {
            labels.push_back(type.label + "#" + std::to_string(k + 1));
            for (std::size_t i = 0; i < m; ++i) {
                entries[i * n + column] = type.eet_column[i];
            }
        }
    }
    return EetMatrix(catalog.task_labels(), std::move(labels), std::move(entries));
}

std::vector<SystemConfig> enumerate_configs(const MachineCatalog& catalog) {
    std::vector<SystemConfig> out;
    out.reserve(catalog.config_count());
    SystemConfig current{std::vector<std::size_t>(catalog.size(), 0)};
    // Odometer with the last type varying fastest.
    while (true) {
        std::size_t pos = catalog.size();
        while (pos > 0 && current.counts[pos - 1] == catalog.types()[pos - 1].max_count) {
            current.counts[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) {
            break;
        }
        ++current.counts[pos - 1];
        out.push_back(current);
    }
    return out;
}

double config_cost(const MachineCatalog& catalog, const SystemConfig& config) {
    double cost = 0;
    for (std::size_t t = 0; t < catalog.size(); ++t) {
        cost += static_cast<double>(config.counts[t]) * catalog.types()[t].unit_cost;
    }
    return cost;
}

SweepRow score_config(const MachineCatalog& catalog, const SystemConfig& config,
                      const SweepSpec& spec) {
    const auto eet = expand_config(catalog, config);
    const auto report = heet_score(eet, spec.mix);
    const std::size_t n = eet.machines();

    SweepRow row;
    row.config = config;
    row.heet = report.heet;
    row.s_heet = report.s_heet;
    row.throughput = predict_throughput(report, n);
    row.makespan = predict_makespan(report, spec.tasks, n);
    row.cost = config_cost(catalog, config);
    row.meets_target = row.throughput >= spec.target_throughput;
    return row;
}

std::vector<SweepRow> sweep_serial(const MachineCatalog& catalog, const SweepSpec& spec) {
    check_spec(catalog, spec);
    const auto configs = enumerate_configs(catalog);
    std::vector<SweepRow> rows;
    rows.reserve(configs.size());
    for (const auto& config : configs) {
        rows.push_back(score_config(catalog, config, spec));
    }
    return rows;
}

namespace {

// Runs body(k) for k in [0, count) across OpenMP threads and rethrows the
// first exception on the calling thread.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
    std::exception_ptr failure;
    const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
        try {
            body(static_cast<std::size_t>(k));
        } catch (...) {
#pragma omp critical(heet_parallel_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::uint64_t row_seed(std::uint64_t base, std::size_t row) {
    // splitmix64 finaliser over base + row
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(row) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void simulate_row(SweepRow& row, const MachineCatalog& catalog, const WorkloadTrace& bag,
                  const NoiseSpec& noise, std::size_t index) {
    NoiseSpec row_noise = noise;
    row_noise.seed = row_seed(noise.seed, index);
    const auto result = simulate(expand_config(catalog, row.config), bag, row_noise);
    row.simulated_makespan = result.makespan;
    row.simulated_throughput = result.throughput;
}

} // namespace

std::vector<SweepRow> sweep(const MachineCatalog& catalog, const SweepSpec& spec) {
    check_spec(catalog, spec);
    const auto configs = enumerate_configs(catalog);
    std::vector<SweepRow> rows(configs.size());
    parallel_for(configs.size(), [&](std::size_t k) {
        rows[k] = score_config(catalog, configs[k], spec);
    });
    return rows;
}

void attach_simulation(std::vector<SweepRow>& rows, const MachineCatalog& catalog,
                       const SweepSpec& spec, std::uint64_t trace_seed, const NoiseSpec& noise) {
    const auto bag = synth_bag(spec.tasks, spec.mix, catalog.task_labels(), trace_seed);
    parallel_for(rows.size(), [&](std::size_t k) {
        simulate_row(rows[k], catalog, bag, noise, k);
    });
}

void attach_simulation_serial(std::vector<SweepRow>& rows, const MachineCatalog& catalog,
                              const SweepSpec& spec, std::uint64_t trace_seed,
                              const NoiseSpec& noise) {
    const auto bag = synth_bag(spec.tasks, spec.mix, catalog.task_labels(), trace_seed);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        simulate_row(rows[k], catalog, bag, noise, k);
    }
}

std::optional<SweepRow> optimize(std::span<const SweepRow> rows, double target_throughput) {
    const SweepRow* best = nullptr;
    for (const auto& row : rows) {
        if (!(row.throughput >= target_throughput)) {
            continue;
        }
        if (best == nullptr || row.cost < best->cost ||
            (row.cost == best->cost &&
             (row.throughput > best->throughput ||
              (row.throughput == best->throughput && row.config < best->config)))) {
            best = &row;
        }
    }
    if (best == nullptr) {
        return std::nullopt;
    }
    return *best;
}

} // namespace heet
