#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heet/eet.hpp"
#include "heet/simulator.hpp"

namespace heet {

struct MachineType {
    std::string label;
    double unit_cost = 0;             // currency per hour
    std::vector<double> eet_column;   // seconds, one per task type
    std::size_t max_count = 0;

    bool operator==(const MachineType&) const = default;
};

class MachineCatalog {
public:
    MachineCatalog(std::vector<std::string> task_labels, std::vector<MachineType> types);

    const std::vector<std::string>& task_labels() const noexcept { return task_labels_; }
    const std::vector<MachineType>& types() const noexcept { return types_; }
    std::size_t size() const noexcept { return types_.size(); }

    // Number of non-empty configurations the sweep enumerates.
    std::size_t config_count() const;

    bool operator==(const MachineCatalog&) const = default;

private:
    std::vector<std::string> task_labels_;
    std::vector<MachineType> types_;
};

// Instance count per catalog type.
struct SystemConfig {
    std::vector<std::size_t> counts;

    std::size_t machines() const;
    auto operator<=>(const SystemConfig&) const = default;
};

struct SweepRow {
    SystemConfig config;
    double heet = 0;
    double s_heet = 0;
    double throughput = 0;  // predicted, tasks per second
    double makespan = 0;    // predicted for the sweep's task count, seconds
    double cost = 0;
    bool meets_target = false;
    std::optional<double> simulated_makespan;
    std::optional<double> simulated_throughput;

    bool operator==(const SweepRow&) const = default;
};

struct SweepSpec {
    WorkloadMix mix;
    double target_throughput;
    std::size_t tasks = 1000;
};

// One column per machine instance; instance labels are "<type>#k".
EetMatrix expand_config(const MachineCatalog& catalog, const SystemConfig& config);

// Every count vector within the catalog bounds except all-zero, in
// lexicographic order.
std::vector<SystemConfig> enumerate_configs(const MachineCatalog& catalog);

double config_cost(const MachineCatalog& catalog, const SystemConfig& config);

SweepRow score_config(const MachineCatalog& catalog, const SystemConfig& config,
                      const SweepSpec& spec);

// Scores every configuration. The parallel version distributes configurations
// over OpenMP threads; both return rows in enumeration order.
std::vector<SweepRow> sweep(const MachineCatalog& catalog, const SweepSpec& spec);
std::vector<SweepRow> sweep_serial(const MachineCatalog& catalog, const SweepSpec& spec);

// Fills simulated_makespan/simulated_throughput by running one shared bag of
// spec.tasks tasks through every configuration. Noise streams are derived
// per row from noise.seed, so results do not depend on the thread count.
void attach_simulation(std::vector<SweepRow>& rows, const MachineCatalog& catalog,
                       const SweepSpec& spec, std::uint64_t trace_seed, const NoiseSpec& noise);
void attach_simulation_serial(std::vector<SweepRow>& rows, const MachineCatalog& catalog,
                              const SweepSpec& spec, std::uint64_t trace_seed,
                              const NoiseSpec& noise);

// Cheapest row meeting the target; ties go to higher predicted throughput,
// then to the lexicographically smaller configuration.
std::optional<SweepRow> optimize(std::span<const SweepRow> rows, double target_throughput);

} // namespace heet
