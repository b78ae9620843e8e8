#include "heet/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "heet/errors.hpp"

namespace heet {

WorkloadTrace::WorkloadTrace(std::vector<TaskArrival> records) : records_(std::move(records)) {
    double previous = 0;
    for (std::size_t k = 0; k < records_.size(); ++k) {
        const double t = records_[k].time;
        if (!std::isfinite(t) || t < 0) {
            throw DomainError("arrival time of record " + std::to_string(k) +
                              " must be finite and non-negative");
        }
        if (t < previous) {
            throw DomainError("arrival times decrease at record " + std::to_string(k));
        }
        if (records_[k].type.empty()) {
            throw DomainError("record " + std::to_string(k) + " has an empty task type");
        }
        previous = t;
    }
}

bool WorkloadTrace::is_bag() const noexcept {
    return std::all_of(records_.begin(), records_.end(),
                       [](const TaskArrival& r) { return r.time == 0; });
}

namespace {

void check_labels(std::span<const std::string> labels, const WorkloadMix& mix) {
    if (labels.size() != mix.size()) {
        throw DomainError("workload mix has " + std::to_string(mix.size()) +
                          " weights for " + std::to_string(labels.size()) + " task labels");
    }
}

} // namespace

std::vector<std::size_t> apportion(std::size_t tasks, const WorkloadMix& mix) {
    const std::size_t m = mix.size();
    std::vector<std::size_t> counts(m);
    std::vector<double> remainder(m);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double quota = static_cast<double>(tasks) * mix[i];
        counts[i] = static_cast<std::size_t>(std::floor(quota));
        remainder[i] = quota - static_cast<double>(counts[i]);
        assigned += counts[i];
    }
    // Rounding in quota can overshoot by one when weights sum slightly above 1.
    while (assigned > tasks) {
        auto it = std::max_element(counts.begin(), counts.end());
        --*it;
        --assigned;
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < tasks; k = (k + 1) % m) {
        if (mix[order[k]] > 0) {
            ++counts[order[k]];
            ++assigned;
        }
    }
    return counts;
}

WorkloadTrace synth_poisson_trace(double rate, std::size_t tasks, const WorkloadMix& mix,
                                  std::span<const std::string> task_labels, std::uint64_t seed) {
    if (!(rate > 0) || !std::isfinite(rate)) {
        throw DomainError("arrival rate must be positive");
    }
    if (tasks == 0) {
        throw DomainError("task count must be at least 1");
    }
    check_labels(task_labels, mix);

    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> gap(rate);
    std::discrete_distribution<std::size_t> pick(mix.weights().begin(), mix.weights().end());

    std::vector<TaskArrival> records;
    records.reserve(tasks);
    double t = 0;
    for (std::size_t k = 0; k < tasks; ++k) {
        t += gap(rng);
        records.push_back({t, task_labels[pick(rng)]});
    }
    return WorkloadTrace(std::move(records));
}

WorkloadTrace synth_bag(std::size_t tasks, const WorkloadMix& mix,
                        std::span<const std::string> task_labels, std::uint64_t seed) {
    if (tasks == 0) {
        throw DomainError("task count must be at least 1");
    }
    check_labels(task_labels, mix);

    const auto counts = apportion(tasks, mix);
    std::vector<TaskArrival> records;
    records.reserve(tasks);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        for (std::size_t k = 0; k < counts[i]; ++k) {
            records.push_back({0.0, task_labels[i]});
        }
    }
    std::mt19937_64 rng(seed);
    std::shuffle(records.begin(), records.end(), rng);
    return WorkloadTrace(std::move(records));
}

WorkloadTrace uniform_bag(std::size_t tasks, const std::string& type) {
    return WorkloadTrace(std::vector<TaskArrival>(tasks, TaskArrival{0.0, type}));
}

void ProfileSamples::add(const std::string& task, const std::string& machine, double seconds) {
    if (task.empty() || machine.empty()) {
        throw DomainError("profile sample with an empty label");
    }
    if (!std::isfinite(seconds) || seconds <= 0) {
        throw DomainError("non-positive sample for (" + task + ", " + machine + ")");
    }
    if (std::find(tasks_.begin(), tasks_.end(), task) == tasks_.end()) {
        tasks_.push_back(task);
    }
    if (std::find(machines_.begin(), machines_.end(), machine) == machines_.end()) {
        machines_.push_back(machine);
    }
    cells_[{task, machine}].push_back(seconds);
}

const std::vector<double>* ProfileSamples::samples(const std::string& task,
                                                   const std::string& machine) const {
    const auto it = cells_.find({task, machine});
    return it == cells_.end() ? nullptr : &it->second;
}

EetMatrix ingest_profile(const ProfileSamples& samples) {
    if (samples.task_labels().empty()) {
        throw DomainError("incomplete profile grid: no samples");
    }
    std::vector<double> entries;
    entries.reserve(samples.task_labels().size() * samples.machine_labels().size());
    for (const auto& task : samples.task_labels()) {
        for (const auto& machine : samples.machine_labels()) {
            const auto* cell = samples.samples(task, machine);
            if (cell == nullptr || cell->empty()) {
                throw DomainError("incomplete profile grid: no samples for (" + task + ", " +
                                  machine + ")");
            }
            // Summing in sorted order makes the mean independent of sample order.
            std::vector<double> sorted = *cell;
            std::sort(sorted.begin(), sorted.end());
            const double sum = std::accumulate(sorted.begin(), sorted.end(), 0.0);
            entries.push_back(sum / static_cast<double>(sorted.size()));
        }
    }
    return EetMatrix(samples.task_labels(), samples.machine_labels(), std::move(entries));
}

} // namespace heet
