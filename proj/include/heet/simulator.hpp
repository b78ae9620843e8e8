#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "heet/eet.hpp"
#include "heet/workload.hpp"

namespace heet {

inline constexpr std::uint64_t kDefaultSeed = 20240521;

enum class NoiseMode { none, multiplicative };

// Multiplicative lognormal noise on execution times, parameterised by its
// coefficient of variation and normalised to mean 1.
struct NoiseSpec {
    NoiseMode mode = NoiseMode::none;
    double coefficient_of_variation = 0;
    std::uint64_t seed = kDefaultSeed;

    static NoiseSpec off() { return {}; }
    static NoiseSpec lognormal(double cov, std::uint64_t seed) {
        return {NoiseMode::multiplicative, cov, seed};
    }
};

// Which free machine receives the queue head.
enum class Dispatch {
    lowest_free,  // lowest-index free machine
    cyclic,       // first free machine at or after the one following the last assignment
};

struct SimOptions {
    NoiseSpec noise;
    Dispatch dispatch = Dispatch::lowest_free;
    bool record_events = false;
};

struct SimMachine {
    std::size_t machine_index = 0;
    double busy_until = 0;
    std::size_t tasks_completed = 0;
    double busy_time = 0;

    bool operator==(const SimMachine&) const = default;
};

enum class EventKind { arrival, start, finish };

struct SimEvent {
    double time = 0;
    EventKind kind = EventKind::arrival;
    std::size_t task_id = 0;
    std::optional<std::size_t> machine;  // unset for arrivals

    bool operator==(const SimEvent&) const = default;
};

// Where and when one task of the trace ran; indexed by trace position.
struct TaskRun {
    std::size_t machine = 0;
    double start = 0;
    double finish = 0;

    bool operator==(const TaskRun&) const = default;
};

struct SimResult {
    double makespan = 0;
    double throughput = 0;  // completed / makespan
    std::size_t completed = 0;
    std::vector<SimMachine> per_machine;
    std::vector<TaskRun> runs;
    std::vector<SimEvent> events;  // only with SimOptions::record_events

    bool operator==(const SimResult&) const = default;
};

// Single unbounded FCFS queue; the head task goes to a free machine chosen by
// the dispatch rule. Completions at time t are processed before arrivals at t.
SimResult simulate(const EetMatrix& eet, const WorkloadTrace& trace, const SimOptions& options);
SimResult simulate(const EetMatrix& eet, const WorkloadTrace& trace,
                   const NoiseSpec& noise = NoiseSpec::off());

// Homogeneous-counterpart makespan over heterogeneous makespan, noise off.
double true_speedup(const EetMatrix& eet, const WorkloadTrace& trace);

// Builds the regime where exactly one machine is busy at any time: each task
// arrives when the previous one completes and machines are cycled in index
// order. Requires a single task type and tasks divisible by the machine count.
double one_busy_regime_speedup(const EetMatrix& eet_row, std::size_t tasks,
                               Dispatch dispatch = Dispatch::cyclic);

// Minimum over all splits of `tasks` identical tasks across the machines of a
// single-task-type row of max_j(count_j * e_j). Limited to 4 machines and 12 tasks.
double exhaustive_min_makespan(const EetMatrix& eet_row, std::size_t tasks);

inline constexpr std::size_t kExhaustiveMaxMachines = 4;
inline constexpr std::size_t kExhaustiveMaxTasks = 12;

} // namespace heet
