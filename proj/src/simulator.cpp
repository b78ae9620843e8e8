#include "heet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <unordered_map>

#include "heet/errors.hpp"

namespace heet {

namespace {

struct Completion {
    double time;
    std::size_t machine;

    bool operator>(const Completion& other) const {
        return time != other.time ? time > other.time : machine > other.machine;
    }
};

class NoiseSource {
public:
    explicit NoiseSource(const NoiseSpec& spec) : rng_(spec.seed) {
        if (!(spec.coefficient_of_variation >= 0) || !std::isfinite(spec.coefficient_of_variation)) {
            throw DomainError("noise coefficient of variation must be finite and non-negative");
        }
        enabled_ = spec.mode == NoiseMode::multiplicative && spec.coefficient_of_variation > 0;
        if (enabled_) {
            const double cov = spec.coefficient_of_variation;
            const double sigma2 = std::log1p(cov * cov);
            dist_ = std::lognormal_distribution<double>(-0.5 * sigma2, std::sqrt(sigma2));
        }
    }

    double factor() { return enabled_ ? dist_(rng_) : 1.0; }

private:
    bool enabled_ = false;
    std::mt19937_64 rng_;
    std::lognormal_distribution<double> dist_;
};

std::vector<std::size_t> resolve_types(const EetMatrix& eet, const WorkloadTrace& trace) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < eet.tasks(); ++i) {
        index.emplace(eet.task_labels()[i], i);
    }
    std::vector<std::size_t> types;
    types.reserve(trace.size());
    double previous = 0;
    for (const auto& r : trace.records()) {
        const auto it = index.find(r.type);
        if (it == index.end()) {
            throw DomainError("unknown task type '" + r.type + "'");
        }
        if (r.time < previous) {
            throw DomainError("arrival times decrease");
        }
        previous = r.time;
        types.push_back(it->second);
    }
    return types;
}

void check_single_row(const EetMatrix& eet_row) {
    if (eet_row.tasks() != 1) {
        throw DomainError("expected a single-task-type EET matrix");
    }
}

} // namespace

SimResult simulate(const EetMatrix& eet, const WorkloadTrace& trace, const SimOptions& options) {
    if (trace.empty()) {
        throw DomainError("workload trace is empty");
    }
    const auto types = resolve_types(eet, trace);
    const auto& records = trace.records();
    const std::size_t n = eet.machines();
    const std::size_t c = records.size();

    NoiseSource noise(options.noise);

    SimResult result;
    result.per_machine.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        result.per_machine[j].machine_index = j;
    }
    result.runs.resize(c);

    std::set<std::size_t> free_machines;
    for (std::size_t j = 0; j < n; ++j) {
        free_machines.insert(j);
    }
    std::priority_queue<Completion, std::vector<Completion>, std::greater<>> busy;
    std::deque<std::size_t> waiting;
    std::size_t next_arrival = 0;
    std::size_t last_assigned = n - 1;

    auto log = [&](double t, EventKind kind, std::size_t task, std::optional<std::size_t> machine) {
        if (options.record_events) {
            result.events.push_back({t, kind, task, machine});
        }
    };

    auto pick_machine = [&]() {
        if (options.dispatch == Dispatch::cyclic) {
            auto it = free_machines.lower_bound((last_assigned + 1) % n);
            if (it == free_machines.end()) {
                it = free_machines.begin();
            }
            return *it;
        }
        return *free_machines.begin();
    };

    while (next_arrival < c || !waiting.empty() || !busy.empty()) {
        double now = std::numeric_limits<double>::infinity();
        if (next_arrival < c) {
            now = records[next_arrival].time;
        }
        if (!busy.empty()) {
            now = std::min(now, busy.top().time);
        }

        while (!busy.empty() && busy.top().time <= now) {
            const auto done = busy.top();
            busy.pop();
            free_machines.insert(done.machine);
        }
        while (next_arrival < c && records[next_arrival].time <= now) {
            log(now, EventKind::arrival, next_arrival, std::nullopt);
            waiting.push_back(next_arrival++);
        }
        while (!waiting.empty() && !free_machines.empty()) {
            const std::size_t task = waiting.front();
            waiting.pop_front();
            const std::size_t machine = pick_machine();
            free_machines.erase(machine);
            last_assigned = machine;

            const double duration = eet.at(types[task], machine) * noise.factor();
            const double finish = now + duration;
            busy.push({finish, machine});

            auto& stats = result.per_machine[machine];
            stats.busy_until = finish;
            stats.busy_time += duration;
            ++stats.tasks_completed;
            result.runs[task] = {machine, now, finish};
            log(now, EventKind::start, task, machine);
        }
    }

    if (options.record_events) {
        // Finish events are emitted after the run so the log stays in time order.
        std::vector<SimEvent> finishes;
        finishes.reserve(c);
        for (std::size_t k = 0; k < c; ++k) {
            finishes.push_back({result.runs[k].finish, EventKind::finish, k, result.runs[k].machine});
        }
        std::vector<SimEvent> merged;
        merged.reserve(result.events.size() + c);
        auto event_before = [](const SimEvent& a, const SimEvent& b) {
            if (a.time != b.time) {
                return a.time < b.time;
            }
            // Completions precede arrivals and starts at equal times.
            return a.kind == EventKind::finish && b.kind != EventKind::finish;
        };
        std::stable_sort(finishes.begin(), finishes.end(), event_before);
        std::merge(finishes.begin(), finishes.end(), result.events.begin(), result.events.end(),
                   std::back_inserter(merged), event_before);
        result.events = std::move(merged);
    }

    for (const auto& run : result.runs) {
        result.makespan = std::max(result.makespan, run.finish);
    }
    result.completed = c;
    result.throughput = static_cast<double>(c) / result.makespan;
    return result;
}

SimResult simulate(const EetMatrix& eet, const WorkloadTrace& trace, const NoiseSpec& noise) {
    SimOptions options;
    options.noise = noise;
    return simulate(eet, trace, options);
}

double true_speedup(const EetMatrix& eet, const WorkloadTrace& trace) {
    const double heterogeneous = simulate(eet, trace).makespan;
    const double homogeneous = simulate(homogeneous_counterpart(eet), trace).makespan;
    return homogeneous / heterogeneous;
}

namespace {

double one_busy_makespan(const EetMatrix& eet_row, std::size_t tasks, Dispatch dispatch) {
    const std::size_t n = eet_row.machines();
    const auto row = eet_row.row(0);
    const auto& type = eet_row.task_labels().front();

    // Each arrival coincides with the previous completion on the machine the
    // cyclic rule hands it to.
    std::vector<TaskArrival> records;
    records.reserve(tasks);
    double t = 0;
    for (std::size_t k = 0; k < tasks; ++k) {
        records.push_back({t, type});
        const std::size_t machine = dispatch == Dispatch::cyclic ? k % n : 0;
        t += row[machine];
    }
    SimOptions options;
    options.dispatch = dispatch;
    const auto result = simulate(eet_row, WorkloadTrace(std::move(records)), options);

    double busy = 0;
    for (const auto& m : result.per_machine) {
        busy += m.busy_time;
    }
    if (std::abs(busy - result.makespan) > 1e-9 * result.makespan) {
        throw std::logic_error("one-busy construction overlapped machine activity");
    }
    return result.makespan;
}

} // namespace

double one_busy_regime_speedup(const EetMatrix& eet_row, std::size_t tasks, Dispatch dispatch) {
    check_single_row(eet_row);
    if (tasks == 0 || tasks % eet_row.machines() != 0) {
        throw DomainError("task count " + std::to_string(tasks) +
                          " is not a positive multiple of the machine count " +
                          std::to_string(eet_row.machines()));
    }
    const double heterogeneous = one_busy_makespan(eet_row, tasks, dispatch);
    const double homogeneous = one_busy_makespan(homogeneous_counterpart(eet_row), tasks, dispatch);
    return homogeneous / heterogeneous;
}

namespace {

// Finish time of `count` back-to-back tasks, accumulated the way the
// simulator's clock advances so equal schedules compare equal bit for bit.
double serial_finish(double duration, std::size_t count) {
    double t = 0;
    for (std::size_t k = 0; k < count; ++k) {
        t += duration;
    }
    return t;
}

void best_split(std::span<const double> row, std::size_t machine, std::size_t remaining,
                double current, double& best) {
    if (machine + 1 == row.size()) {
        best = std::min(best, std::max(current, serial_finish(row[machine], remaining)));
        return;
    }
    for (std::size_t count = 0; count <= remaining; ++count) {
        best_split(row, machine + 1, remaining - count,
                   std::max(current, serial_finish(row[machine], count)), best);
    }
}

} // namespace

double exhaustive_min_makespan(const EetMatrix& eet_row, std::size_t tasks) {
    check_single_row(eet_row);
    if (eet_row.machines() > kExhaustiveMaxMachines || tasks > kExhaustiveMaxTasks) {
        throw DomainError("instance too large for exhaustive search");
    }
    if (tasks == 0) {
        throw DomainError("task count must be at least 1");
    }
    double best = std::numeric_limits<double>::infinity();
    best_split(eet_row.row(0), 0, tasks, 0.0, best);
    return best;
}

} // namespace heet
