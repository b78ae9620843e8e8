#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace heet {

// Expected execution times: one row per task type, one column per machine
// instance. Repeated instances of a catalog machine type appear as repeated
// columns with distinct labels ("g4dn.xlarge#2").
class EetMatrix {
public:
    // entries are row-major, tasks() * machines() values in seconds.
    EetMatrix(std::vector<std::string> task_labels,
              std::vector<std::string> machine_labels,
              std::vector<double> entries);

    static EetMatrix from_rows(std::vector<std::string> task_labels,
                               std::vector<std::string> machine_labels,
                               const std::vector<std::vector<double>>& rows);

    // Unlabelled convenience constructor; labels become T1.., M1..
    static EetMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t tasks() const noexcept { return task_labels_.size(); }
    std::size_t machines() const noexcept { return machine_labels_.size(); }

    double at(std::size_t task, std::size_t machine) const {
        return entries_[task * machines() + machine];
    }
    std::span<const double> row(std::size_t task) const;
    std::vector<double> column(std::size_t machine) const;
    std::span<const double> entries() const noexcept { return entries_; }

    const std::vector<std::string>& task_labels() const noexcept { return task_labels_; }
    const std::vector<std::string>& machine_labels() const noexcept { return machine_labels_; }
    std::optional<std::size_t> task_index(const std::string& label) const;

    double max_entry() const;
    double min_entry() const;

    bool operator==(const EetMatrix&) const = default;

private:
    std::vector<std::string> task_labels_;
    std::vector<std::string> machine_labels_;
    std::vector<double> entries_;
};

// Per-task-type proportions of a workload.
class WorkloadMix {
public:
    static constexpr double kSumTolerance = 1e-12;

    explicit WorkloadMix(std::vector<double> weights);
    static WorkloadMix uniform(std::size_t task_types);

    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }

private:
    std::vector<double> weights_;
};

enum class Axis { row, column };

struct SpeedupVector {
    std::vector<double> values;
    Axis axis = Axis::row;
    std::size_t index = 0;
};

/// Speedup of each machine over the slowest machine for one task type.
SpeedupVector row_speedups(const EetMatrix& eet, std::size_t task);

/// Speedup of each task type over the slowest task type on one machine.
SpeedupVector col_speedups(const EetMatrix& eet, std::size_t machine);

double arithmetic_mean_speedup(std::span<const double> values);

// Plain harmonic mean n / sum(1/v).
double harmonic_mean_speedup(std::span<const double> values);

// Weighted harmonic mean sum(w) / sum(w/v). Weights must be non-negative
// with at least one positive entry; for a WorkloadMix sum(w) == 1.
double harmonic_mean_speedup(std::span<const double> values, std::span<const double> weights);
double harmonic_mean_speedup(std::span<const double> values, const WorkloadMix& mix);

/// Execution time of the mix-equivalent task on each machine:
/// e*_j = max_i e_ij / weighted_harmonic_mean(col_speedups(j)).
std::vector<double> equivalent_task_times(const EetMatrix& eet, const WorkloadMix& mix);

struct HeetReport {
    std::vector<double> beta_bar;     // weighted harmonic mean column speedups
    std::vector<double> equiv_times;  // e*_j, seconds
    std::vector<double> alpha_star;   // speedups of e* over its slowest entry
    double alpha_star_mean = 0;       // arithmetic mean of alpha_star
    double heet = 0;                  // seconds
    double s_heet = 0;                // heet / machines, seconds
    double predicted_throughput = 0;  // machines / heet, tasks per second
    std::size_t machines = 0;

    bool operator==(const HeetReport&) const = default;
};

HeetReport heet_score(const EetMatrix& eet, const WorkloadMix& mix);
HeetReport heet_score(const EetMatrix& eet);

// tau = (tasks / machines) * heet. Throws DomainError when machines does not
// match the report.
double predict_makespan(const HeetReport& report, std::size_t tasks, std::size_t machines);

// theta = machines / heet.
double predict_throughput(const HeetReport& report, std::size_t machines);

// Makespan predicted by treating every task as taking per_task_seconds on
// every machine. Used for the entry-mean baselines.
double makespan_from_mean(double per_task_seconds, std::size_t tasks, std::size_t machines);

struct BaselineMeans {
    double arithmetic = 0;
    double harmonic = 0;
    double geometric = 0;
};

// Means over all entries of the matrix.
BaselineMeans baseline_means(const EetMatrix& eet);

// Same shape, every entry set to the global maximum.
EetMatrix homogeneous_counterpart(const EetMatrix& eet);

// Upper bound sum(alpha)/tasks on the relative gap between the arithmetic
// mean speedup and the true speedup of a saturated bag.
double error_bound(std::span<const double> row_alphas, std::size_t tasks);

} // namespace heet
