#include "heet/eet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "heet/errors.hpp"

namespace heet {

namespace {

void check_labels(const std::vector<std::string>& labels, const char* axis) {
    if (labels.empty()) {
        throw DomainError(std::string("EET matrix needs at least one ") + axis);
    }
    std::unordered_set<std::string> seen;
    for (const auto& label : labels) {
        if (label.empty()) {
            throw DomainError(std::string("empty ") + axis + " label");
        }
        if (!seen.insert(label).second) {
            throw DomainError(std::string("duplicate ") + axis + " label '" + label + "'");
        }
    }
}

std::vector<std::string> numbered(char prefix, std::size_t count) {
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(prefix + std::to_string(i + 1));
    }
    return out;
}

// Slowest element is the baseline; every value becomes max / value.
std::vector<double> speedups_over_max(std::span<const double> times) {
    const double slowest = *std::max_element(times.begin(), times.end());
    std::vector<double> out(times.size());
    std::transform(times.begin(), times.end(), out.begin(),
                   [slowest](double t) { return slowest / t; });
    return out;
}

} // namespace

EetMatrix::EetMatrix(std::vector<std::string> task_labels,
                     std::vector<std::string> machine_labels,
                     std::vector<double> entries)
    : task_labels_(std::move(task_labels)),
      machine_labels_(std::move(machine_labels)),
      entries_(std::move(entries)) {
    check_labels(task_labels_, "task");
    check_labels(machine_labels_, "machine");
    if (entries_.size() != tasks() * machines()) {
        throw DomainError("EET matrix has " + std::to_string(entries_.size()) +
                          " entries, expected " + std::to_string(tasks() * machines()));
    }
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const double e = entries_[k];
        if (!std::isfinite(e) || e <= 0) {
            throw DomainError("EET entry (" + task_labels_[k / machines()] + ", " +
                              machine_labels_[k % machines()] +
                              ") must be positive and finite");
        }
    }
}

EetMatrix EetMatrix::from_rows(std::vector<std::string> task_labels,
                               std::vector<std::string> machine_labels,
                               const std::vector<std::vector<double>>& rows) {
    std::vector<double> entries;
    for (const auto& r : rows) {
        if (r.size() != machine_labels.size()) {
            throw DomainError("ragged EET rows");
        }
        entries.insert(entries.end(), r.begin(), r.end());
    }
    if (rows.size() != task_labels.size()) {
        throw DomainError("EET row count does not match task labels");
    }
    return EetMatrix(std::move(task_labels), std::move(machine_labels), std::move(entries));
}

EetMatrix EetMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.empty() ? 0 : rows.front().size();
    return from_rows(numbered('T', rows.size()), numbered('M', n), rows);
}

std::span<const double> EetMatrix::row(std::size_t task) const {
    if (task >= tasks()) {
        throw DomainError("task index " + std::to_string(task) + " out of range");
    }
    return std::span<const double>(entries_).subspan(task * machines(), machines());
}

std::vector<double> EetMatrix::column(std::size_t machine) const {
    if (machine >= machines()) {
        throw DomainError("machine index " + std::to_string(machine) + " out of range");
    }
    std::vector<double> out(tasks());
    for (std::size_t i = 0; i < tasks(); ++i) {
        out[i] = at(i, machine);
    }
    return out;
}

std::optional<std::size_t> EetMatrix::task_index(const std::string& label) const {
    const auto it = std::find(task_labels_.begin(), task_labels_.end(), label);
    if (it == task_labels_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - task_labels_.begin());
}

double EetMatrix::max_entry() const {
    return *std::max_element(entries_.begin(), entries_.end());
}

double EetMatrix::min_entry() const {
    return *std::min_element(entries_.begin(), entries_.end());
}

WorkloadMix::WorkloadMix(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw DomainError("workload mix is empty");
    }
    double sum = 0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0) {
            throw DomainError("workload mix weights must be finite and non-negative");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw DomainError("workload mix weights sum to " + std::to_string(sum) + ", not 1");
    }
}

WorkloadMix WorkloadMix::uniform(std::size_t task_types) {
    if (task_types == 0) {
        throw DomainError("workload mix is empty");
    }
    return WorkloadMix(std::vector<double>(task_types, 1.0 / static_cast<double>(task_types)));
}

SpeedupVector row_speedups(const EetMatrix& eet, std::size_t task) {
    return {speedups_over_max(eet.row(task)), Axis::row, task};
}

SpeedupVector col_speedups(const EetMatrix& eet, std::size_t machine) {
    return {speedups_over_max(eet.column(machine)), Axis::column, machine};
}

double arithmetic_mean_speedup(std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("mean of an empty speedup vector");
    }
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double harmonic_mean_speedup(std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("mean of an empty speedup vector");
    }
    double inverse_sum = 0;
    for (double v : values) {
        inverse_sum += 1.0 / v;
    }
    return static_cast<double>(values.size()) / inverse_sum;
}

double harmonic_mean_speedup(std::span<const double> values, std::span<const double> weights) {
    if (values.empty()) {
        throw DomainError("mean of an empty speedup vector");
    }
    if (weights.size() != values.size()) {
        throw DomainError("weight count does not match speedup vector length");
    }
    double weight_sum = 0;
    double weighted_inverse = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (weights[i] < 0) {
            throw DomainError("negative weight");
        }
        weight_sum += weights[i];
        weighted_inverse += weights[i] / values[i];
    }
    if (weight_sum <= 0) {
        throw DomainError("all weights are zero");
    }
    return weight_sum / weighted_inverse;
}

double harmonic_mean_speedup(std::span<const double> values, const WorkloadMix& mix) {
    return harmonic_mean_speedup(values, mix.weights());
}

namespace {

std::vector<double> beta_bar_of(const EetMatrix& eet, const WorkloadMix& mix) {
    if (mix.size() != eet.tasks()) {
        throw DomainError("workload mix has " + std::to_string(mix.size()) +
                          " weights for " + std::to_string(eet.tasks()) + " task types");
    }
    std::vector<double> beta_bar(eet.machines());
    for (std::size_t j = 0; j < eet.machines(); ++j) {
        beta_bar[j] = harmonic_mean_speedup(col_speedups(eet, j).values, mix);
    }
    return beta_bar;
}

std::vector<double> equiv_from_beta(const EetMatrix& eet, std::span<const double> beta_bar) {
    std::vector<double> equiv(eet.machines());
    for (std::size_t j = 0; j < eet.machines(); ++j) {
        const auto col = eet.column(j);
        equiv[j] = *std::max_element(col.begin(), col.end()) / beta_bar[j];
    }
    return equiv;
}

} // namespace

std::vector<double> equivalent_task_times(const EetMatrix& eet, const WorkloadMix& mix) {
    return equiv_from_beta(eet, beta_bar_of(eet, mix));
}

HeetReport heet_score(const EetMatrix& eet, const WorkloadMix& mix) {
    HeetReport r;
    r.machines = eet.machines();
    r.beta_bar = beta_bar_of(eet, mix);
    r.equiv_times = equiv_from_beta(eet, r.beta_bar);
    r.alpha_star = speedups_over_max(r.equiv_times);
    r.alpha_star_mean = arithmetic_mean_speedup(r.alpha_star);
    const double slowest = *std::max_element(r.equiv_times.begin(), r.equiv_times.end());
    r.heet = slowest / r.alpha_star_mean;
    r.s_heet = r.heet / static_cast<double>(r.machines);
    r.predicted_throughput = static_cast<double>(r.machines) / r.heet;
    return r;
}

HeetReport heet_score(const EetMatrix& eet) {
    return heet_score(eet, WorkloadMix::uniform(eet.tasks()));
}

namespace {

void check_machine_count(const HeetReport& report, std::size_t machines) {
    if (machines != report.machines) {
        throw DomainError("machine count " + std::to_string(machines) +
                          " does not match report (" + std::to_string(report.machines) + ")");
    }
}

} // namespace

double predict_makespan(const HeetReport& report, std::size_t tasks, std::size_t machines) {
    check_machine_count(report, machines);
    return makespan_from_mean(report.heet, tasks, machines);
}

double predict_throughput(const HeetReport& report, std::size_t machines) {
    check_machine_count(report, machines);
    return static_cast<double>(machines) / report.heet;
}

double makespan_from_mean(double per_task_seconds, std::size_t tasks, std::size_t machines) {
    if (tasks == 0) {
        throw DomainError("task count must be at least 1");
    }
    if (machines == 0) {
        throw DomainError("machine count must be at least 1");
    }
    return static_cast<double>(tasks) / static_cast<double>(machines) * per_task_seconds;
}

BaselineMeans baseline_means(const EetMatrix& eet) {
    const auto entries = eet.entries();
    const auto count = static_cast<double>(entries.size());
    double sum = 0;
    double inverse_sum = 0;
    double log_sum = 0;
    for (double e : entries) {
        sum += e;
        inverse_sum += 1.0 / e;
        log_sum += std::log(e);
    }
    return {sum / count, count / inverse_sum, std::exp(log_sum / count)};
}

EetMatrix homogeneous_counterpart(const EetMatrix& eet) {
    return EetMatrix(eet.task_labels(), eet.machine_labels(),
                     std::vector<double>(eet.entries().size(), eet.max_entry()));
}

double error_bound(std::span<const double> row_alphas, std::size_t tasks) {
    if (tasks == 0) {
        throw DomainError("task count must be at least 1");
    }
    return std::accumulate(row_alphas.begin(), row_alphas.end(), 0.0) / static_cast<double>(tasks);
}

} // namespace heet
