#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heet/eet.hpp"

namespace heet {

struct TaskArrival {
    double time = 0;  // seconds
    std::string type;

    bool operator==(const TaskArrival&) const = default;
};

// Ordered arrivals; a bag-of-tasks has every arrival at t = 0.
class WorkloadTrace {
public:
    WorkloadTrace() = default;
    explicit WorkloadTrace(std::vector<TaskArrival> records);

    const std::vector<TaskArrival>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    bool is_bag() const noexcept;

    bool operator==(const WorkloadTrace&) const = default;

private:
    std::vector<TaskArrival> records_;
};

// Largest-remainder apportionment of `tasks` across the mix; leftover units go
// to the largest fractional parts, lowest index first on ties.
std::vector<std::size_t> apportion(std::size_t tasks, const WorkloadMix& mix);

// Exponential inter-arrival gaps with mean 1/rate; types drawn i.i.d. from mix.
WorkloadTrace synth_poisson_trace(double rate, std::size_t tasks, const WorkloadMix& mix,
                                  std::span<const std::string> task_labels, std::uint64_t seed);

// All arrivals at 0 with exact apportioned type counts, order shuffled by seed.
WorkloadTrace synth_bag(std::size_t tasks, const WorkloadMix& mix,
                        std::span<const std::string> task_labels, std::uint64_t seed);

// Bag of `tasks` tasks of one type.
WorkloadTrace uniform_bag(std::size_t tasks, const std::string& type);

// Measured execution times per (task type, machine type) cell. Labels keep
// the order in which they were first seen.
class ProfileSamples {
public:
    void add(const std::string& task, const std::string& machine, double seconds);

    const std::vector<std::string>& task_labels() const noexcept { return tasks_; }
    const std::vector<std::string>& machine_labels() const noexcept { return machines_; }
    const std::vector<double>* samples(const std::string& task, const std::string& machine) const;

private:
    std::vector<std::string> tasks_;
    std::vector<std::string> machines_;
    std::map<std::pair<std::string, std::string>, std::vector<double>> cells_;
};

// Each EET entry is the arithmetic mean of its cell's samples.
EetMatrix ingest_profile(const ProfileSamples& samples);

} // namespace heet
