// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "heet/eet.hpp"
#include "heet/explorer.hpp"
#include "heet/io.hpp"
#include "heet/simulator.hpp"
#include "heet/workload.hpp"
#include "support/catalogs.hpp"
#include "support/oracles.hpp"

using namespace heet;
using heet::testing::Generator;
using heet::testing::Grid;
using heet::testing::relative_gap;

namespace {

// Pinned tolerances and limits.
constexpr double kIdentityTol = 1e-9;          // criteria 1, 4, 10
constexpr double kPredictionTol = 0.05;        // criterion 6, per configuration
constexpr double kSpearmanMin = 0.95;          // criterion 8
constexpr std::size_t kBagTasks = 1000;        // criteria 2, 5, 6
constexpr std::size_t kPropertyCases = 1000;   // criterion 10
const std::vector<double> kNoiseLevels{0.0, 0.1, 0.25, 0.5, 1.0};

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream out;
    out.precision(precision);
    out << v;
    return out.str();
}

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds >= limit_seconds) {
        outcome.passed = false;
        outcome.detail += "; exceeded " + fmt(limit_seconds) + " s";
    }
    if (!outcome.passed) {
        ++failures;
    }
    std::cout << (outcome.passed ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": "
              << outcome.detail << " [" << fmt(seconds, 3) << " s]" << std::endl;
}

EetMatrix single_row(const std::vector<double>& row) { return EetMatrix::from_rows({row}); }

std::vector<double> row_alphas(const std::vector<double>& row) {
    const double slowest = *std::max_element(row.begin(), row.end());
    std::vector<double> alphas;
    for (double e : row) {
        alphas.push_back(slowest / e);
    }
    return alphas;
}

// Minimum makespan over every split of `tasks` identical tasks across the
// machines; a machine's finish is accumulated one task at a time.
double composition_minimum(const std::vector<double>& row, std::size_t tasks) {
    double best = INFINITY;
    std::vector<std::size_t> counts(row.size(), 0);
    std::function<void(std::size_t, std::size_t)> place = [&](std::size_t j, std::size_t left) {
        if (j + 1 == row.size()) {
            counts[j] = left;
            double span = 0;
            for (std::size_t q = 0; q < row.size(); ++q) {
                double finish = 0;
                for (std::size_t k = 0; k < counts[q]; ++k) {
                    finish += row[q];
                }
                span = std::max(span, finish);
            }
            best = std::min(best, span);
            return;
        }
        for (std::size_t k = 0; k <= left; ++k) {
            counts[j] = k;
            place(j + 1, left - k);
        }
    };
    place(0, tasks);
    return best;
}

Outcome heet_pipeline() {
    const auto dir = std::filesystem::temp_directory_path() / ("heet_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto csv = (dir / "worked.csv").string();
    std::ofstream(csv) << "task,M1,M2\nT1,4,2\nT2,8,4\n";
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run({"heet", "heet", "--eet", csv, "--tasks", "1000"}, out, err);
    std::filesystem::remove_all(dir);
    if (code != cli::kOk) {
        return {false, "heet exited " + std::to_string(code) + ": " + err.str()};
    }
    const auto j = io::json::parse(out.str());
    const double oracle = heet::testing::closed_form_heet({{4, 2}, {8, 4}}, {0.5, 0.5});
    const auto e = j["equiv_times"].get<std::vector<double>>();
    const double heet = j["heet"];
    const double s_heet = j["s_heet"];
    const double theta = j["predicted_throughput"];
    const double tau = j["predicted_makespan"];
    const bool ok = e.size() == 2 && relative_gap(e[0], 6) <= kIdentityTol &&
                    relative_gap(e[1], 3) <= kIdentityTol && relative_gap(heet, 4) <= kIdentityTol &&
                    relative_gap(heet, oracle) <= kIdentityTol && relative_gap(s_heet, 2) <= kIdentityTol &&
                    relative_gap(theta, 0.5) <= kIdentityTol && relative_gap(tau, 2000) <= kIdentityTol;
    return {ok, "e*=[" + fmt(e.at(0)) + "," + fmt(e.at(1)) + "] HEET=" + fmt(heet) + " S-HEET=" + fmt(s_heet) +
                    " theta=" + fmt(theta) + " tau(1000)=" + fmt(tau) + " closed form=" + fmt(oracle)};
}

Outcome saturation() {
    Generator gen(101);
    std::size_t violations = 0;
    double worst_gap = 0;
    double worst_ratio = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto row = gen.grid(1, gen.size(2, 6)).front();
        const auto alphas = row_alphas(row);
        const double arithmetic = std::accumulate(alphas.begin(), alphas.end(), 0.0) / alphas.size();
        const double bound = std::accumulate(alphas.begin(), alphas.end(), 0.0) / kBagTasks;
        const double measured = true_speedup(single_row(row), uniform_bag(kBagTasks, "T1"));
        const double gap = std::abs(measured - arithmetic) / measured;
        worst_gap = std::max(worst_gap, gap);
        worst_ratio = std::max(worst_ratio, gap / bound);
        violations += gap > bound;
    }
    return {violations == 0, "100 rows, worst |gamma-mean|/gamma " + fmt(worst_gap) + ", worst gap/bound " +
                                 fmt(worst_ratio) + ", violations " + std::to_string(violations)};
}

Outcome round_robin() {
    Generator gen(102);
    std::size_t instances = 0;
    std::size_t mismatches = 0;
    std::size_t oracle_disagreements = 0;
    std::size_t saturated_mismatches = 0;  // c >= n
    std::string first;
    for (int trial = 0; trial < 50; ++trial) {
        const auto row = gen.grid(1, gen.size(2, kExhaustiveMaxMachines)).front();
        const auto eet = single_row(row);
        for (std::size_t c = 1; c <= kExhaustiveMaxTasks; ++c) {
            ++instances;
            const double simulated = simulate(eet, uniform_bag(c, "T1")).makespan;
            const double minimum = composition_minimum(row, c);
            oracle_disagreements += exhaustive_min_makespan(eet, c) != minimum;
            if (simulated != minimum) {
                saturated_mismatches += c >= row.size();
                if (mismatches++ == 0) {
                    std::ostringstream out;
                    out.precision(17);
                    out << "first: row [";
                    for (std::size_t j = 0; j < row.size(); ++j) {
                        out << (j ? "," : "") << row[j];
                    }
                    out << "] c=" << c << " simulated " << simulated << " minimum " << minimum;
                    first = out.str();
                }
            }
        }
    }
    std::string detail = std::to_string(mismatches) + "/" + std::to_string(instances) +
                         " instances differ from the exhaustive minimum (" +
                         std::to_string(saturated_mismatches) + " with c >= n)";
    if (oracle_disagreements) {
        detail += " (library exhaustive search disagreed with the composition oracle " +
                  std::to_string(oracle_disagreements) + " times)";
    }
    if (!first.empty()) {
        detail += "; " + first;
    }
    return {mismatches == 0 && oracle_disagreements == 0, detail};
}

Outcome one_busy() {
    Generator gen(103);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = gen.size(2, 6);
        const auto row = gen.grid(1, n).front();
        const auto alphas = row_alphas(row);
        double inv = 0;
        for (double a : alphas) {
            inv += 1 / a;
        }
        const double harmonic = static_cast<double>(n) / inv;
        const double measured = one_busy_regime_speedup(single_row(row), n * gen.size(1, 20));
        worst = std::max(worst, relative_gap(measured, harmonic));
    }
    return {worst <= kIdentityTol, "100 rows, worst relative gap " + fmt(worst)};
}

Outcome weighted_harmonic() {
    Generator gen(104);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = gen.size(2, 6);
        const Grid column = gen.grid(m, 1);
        const auto eet = EetMatrix::from_rows(column);
        const auto counts = apportion(kBagTasks, WorkloadMix(gen.weights(m)));
        // realised proportions
        std::vector<double> w;
        for (auto k : counts) {
            w.push_back(static_cast<double>(k) / kBagTasks);
        }
        const auto bag = synth_bag(kBagTasks, WorkloadMix(w), eet.task_labels(), gen.rng());
        double slowest = 0;
        for (const auto& r : column) {
            slowest = std::max(slowest, r[0]);
        }
        double inv = 0;
        for (std::size_t i = 0; i < m; ++i) {
            inv += w[i] / (slowest / column[i][0]);
        }
        const double expected = 1 / inv;
        worst = std::max(worst, relative_gap(true_speedup(eet, bag), expected));
    }
    return {worst <= 1.0 / kBagTasks, "100 mixes, worst relative gap " + fmt(worst) + " (tolerance " +
                                          fmt(1.0 / kBagTasks) + ")"};
}

struct SweepFixture {
    MachineCatalog catalog = heet::testing::inference_catalog();
    SweepSpec spec{WorkloadMix::uniform(4), 1.0, kBagTasks};
    std::vector<SweepRow> rows;
    std::uint64_t trace_seed = 2024;

    SweepFixture() {
        rows = sweep(catalog, spec);
        attach_simulation(rows, catalog, spec, trace_seed, NoiseSpec::off());
    }
};

const SweepFixture& fixture() {
    static const SweepFixture f;
    return f;
}

double mean_abs_error(const std::vector<SweepRow>& rows, const std::function<double(const SweepRow&)>& predicted) {
    double total = 0;
    for (const auto& r : rows) {
        total += std::abs(predicted(r) - *r.simulated_makespan) / *r.simulated_makespan;
    }
    return total / static_cast<double>(rows.size());
}

Outcome prediction_accuracy() {
    const auto& f = fixture();
    double worst = 0;
    for (const auto& r : f.rows) {
        worst = std::max(worst, std::abs(r.makespan - *r.simulated_makespan) / *r.simulated_makespan);
    }
    const bool deterministic_ok = f.rows.size() >= 100 && worst <= kPredictionTol;

    std::vector<double> maes;
    for (double cov : kNoiseLevels) {
        auto rows = f.rows;
        attach_simulation(rows, f.catalog, f.spec, f.trace_seed,
                          cov > 0 ? NoiseSpec::lognormal(cov, 77) : NoiseSpec::off());
        maes.push_back(mean_abs_error(rows, [](const SweepRow& r) { return r.makespan; }));
    }
    bool monotone = true;
    std::string series;
    for (std::size_t k = 0; k < maes.size(); ++k) {
        monotone = monotone && (k == 0 || maes[k] > maes[k - 1]);
        series += (k ? ", " : "") + fmt(kNoiseLevels[k]) + ":" + fmt(maes[k], 4);
    }
    return {deterministic_ok && monotone, std::to_string(f.rows.size()) + " configurations, worst error " +
                                              fmt(worst) + "; MAE by cov {" + series + "}" +
                                              (monotone ? "" : " not increasing")};
}

Outcome baselines() {
    const auto& f = fixture();
    std::vector<double> arithmetic, harmonic, geometric;
    for (const auto& r : f.rows) {
        // Entry means of the expanded matrix, plugged into c * mean / n.
        const auto eet = expand_config(f.catalog, r.config);
        double sum = 0, inv = 0, logs = 0;
        for (double e : eet.entries()) {
            sum += e;
            inv += 1 / e;
            logs += std::log(e);
        }
        const double count = static_cast<double>(eet.entries().size());
        const double scale = static_cast<double>(kBagTasks) / static_cast<double>(eet.machines());
        arithmetic.push_back(scale * sum / count);
        harmonic.push_back(scale * count / inv);
        geometric.push_back(scale * std::exp(logs / count));
    }
    auto by_index = [&](const std::vector<double>& v) {
        double total = 0;
        for (std::size_t k = 0; k < f.rows.size(); ++k) {
            total += std::abs(v[k] - *f.rows[k].simulated_makespan) / *f.rows[k].simulated_makespan;
        }
        return total / static_cast<double>(f.rows.size());
    };
    const double heet = mean_abs_error(f.rows, [](const SweepRow& r) { return r.makespan; });
    const double a = by_index(arithmetic), h = by_index(harmonic), g = by_index(geometric);
    return {heet < a && heet < h && heet < g, "MAE heet " + fmt(heet, 4) + ", arithmetic " + fmt(a, 4) +
                                                  ", harmonic " + fmt(h, 4) + ", geometric " + fmt(g, 4)};
}

Outcome ordering() {
    const auto& f = fixture();
    std::vector<double> s_heet, simulated;
    for (const auto& r : f.rows) {
        s_heet.push_back(r.s_heet);
        simulated.push_back(*r.simulated_makespan);
    }
    const double rho = heet::testing::spearman(s_heet, simulated);
    return {rho >= kSpearmanMin, "Spearman " + fmt(rho) + " over " + std::to_string(f.rows.size()) + " configurations"};
}

Outcome optimizer() {
    std::mt19937_64 rng(105);
    std::size_t agree = 0;
    std::size_t reachable = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto catalog = heet::testing::random_catalog(rng, 200);
        const auto& types = catalog.types();
        const std::size_t m = catalog.task_labels().size();
        Generator gen(rng());
        const auto w = gen.weights(m);

        // Brute force over the count grid.
        std::vector<double> rate(types.size());
        for (std::size_t t = 0; t < types.size(); ++t) {
            double e = 0;
            for (std::size_t i = 0; i < m; ++i) {
                e += w[i] * types[t].eet_column[i];
            }
            rate[t] = 1 / e;
        }
        double best_rate = 0;
        for (std::size_t t = 0; t < types.size(); ++t) {
            best_rate += rate[t] * static_cast<double>(types[t].max_count);
        }
        const double target = best_rate * gen.real(0.05, 1.1);

        std::optional<std::vector<std::size_t>> argmin;
        double argmin_cost = 0, argmin_rate = 0;
        std::vector<std::size_t> counts(types.size(), 0);
        std::function<void(std::size_t)> visit = [&](std::size_t t) {
            if (t == types.size()) {
                if (std::all_of(counts.begin(), counts.end(), [](auto k) { return k == 0; })) {
                    return;
                }
                double cost = 0, theta = 0;
                for (std::size_t q = 0; q < types.size(); ++q) {
                    cost += types[q].unit_cost * static_cast<double>(counts[q]);
                    theta += rate[q] * static_cast<double>(counts[q]);
                }
                if (theta < target) {
                    return;
                }
                const bool better = !argmin || cost < argmin_cost ||
                                    (cost == argmin_cost && (theta > argmin_rate ||
                                                             (theta == argmin_rate && counts < *argmin)));
                if (better) {
                    argmin = counts;
                    argmin_cost = cost;
                    argmin_rate = theta;
                }
                return;
            }
            for (std::size_t k = 0; k <= types[t].max_count; ++k) {
                counts[t] = k;
                visit(t + 1);
            }
        };
        visit(0);

        const SweepSpec spec{WorkloadMix(w), target, 100};
        const auto chosen = optimize(sweep(catalog, spec), target);
        reachable += argmin.has_value();
        if (chosen.has_value() == argmin.has_value() && (!chosen || chosen->config.counts == *argmin)) {
            ++agree;
        }
    }
    return {agree == 100, std::to_string(agree) + "/100 trials match the exhaustive scan (" +
                              std::to_string(reachable) + " with a reachable target)"};
}

Outcome invariants() {
    Generator gen(106);
    std::size_t cases = 0;
    std::vector<std::string> broken;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok && std::find(broken.begin(), broken.end(), what) == broken.end()) {
            broken.push_back(what);
        }
    };
    for (std::size_t k = 0; k < kPropertyCases; ++k) {
        const std::size_t m = gen.size(1, 5);
        const std::size_t n = gen.size(1, 6);
        const Grid g = gen.grid(m, n);
        const auto w = gen.weights(m);
        const auto eet = EetMatrix::from_rows(g);
        const auto report = heet_score(eet, WorkloadMix(w));

        // e* identity and harmonic mean of e*
        const auto oracle = heet::testing::mix_weighted_columns(g, w);
        double inv = 0;
        for (std::size_t j = 0; j < n; ++j) {
            expect(relative_gap(report.equiv_times[j], oracle[j]) <= kIdentityTol, "e* identity");
            inv += 1 / oracle[j];
        }
        expect(relative_gap(report.heet, static_cast<double>(n) / inv) <= kIdentityTol, "harmonic mean of e*");

        // scale equivariance
        const double factor = gen.real(1e-2, 1e2);
        Grid scaled = g;
        for (auto& row : scaled) {
            for (auto& e : row) {
                e *= factor;
            }
        }
        expect(relative_gap(heet_score(EetMatrix::from_rows(scaled), WorkloadMix(w)).heet, factor * report.heet) <=
                   kIdentityTol,
               "scale equivariance");

        // permutation invariance, columns then rows
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), gen.rng);
        Grid permuted = g;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                permuted[i][j] = g[i][order[j]];
            }
        }
        std::vector<std::size_t> row_order(m);
        std::iota(row_order.begin(), row_order.end(), 0);
        std::shuffle(row_order.begin(), row_order.end(), gen.rng);
        Grid both;
        std::vector<double> w_permuted;
        for (auto i : row_order) {
            both.push_back(permuted[i]);
            w_permuted.push_back(w[i]);
        }
        expect(relative_gap(heet_score(EetMatrix::from_rows(both), WorkloadMix(w_permuted)).heet, report.heet) <=
                   kIdentityTol,
               "permutation invariance");

        // simulator: conservation, work conservation, determinism
        const std::size_t c = gen.size(1, 120);
        const auto seed = gen.rng();
        const auto trace = k % 2 ? synth_bag(c, WorkloadMix(w), eet.task_labels(), seed)
                                 : synth_poisson_trace(gen.real(0.1, 4), c, WorkloadMix(w), eet.task_labels(), seed);
        const auto noise = k % 3 == 0 ? NoiseSpec::lognormal(0.3, seed) : NoiseSpec::off();
        const auto a = simulate(eet, trace, noise);
        const auto b = simulate(eet, trace, noise);
        std::size_t total = 0;
        for (const auto& machine : a.per_machine) {
            total += machine.tasks_completed;
        }
        expect(total == c, "sum of per-machine counts equals c");
        bool same = a.makespan == b.makespan && a.runs.size() == b.runs.size();
        for (std::size_t t = 0; same && t < a.runs.size(); ++t) {
            same = a.runs[t].machine == b.runs[t].machine && a.runs[t].start == b.runs[t].start &&
                   a.runs[t].finish == b.runs[t].finish;
        }
        expect(same, "determinism under fixed seed");

        // A waiting task starts exactly when the earliest machine frees up,
        // and no machine sits idle past a queued task's arrival.
        std::vector<double> free_at(n, 0.0);
        bool conserving = true;
        for (std::size_t t = 0; t < c; ++t) {
            const auto& run = a.runs[t];
            const double ready = std::max(trace.records()[t].time, *std::min_element(free_at.begin(), free_at.end()));
            conserving = conserving && run.start == ready && free_at[run.machine] <= run.start;
            free_at[run.machine] = run.finish;
        }
        expect(conserving, "work conservation");
        ++cases;
    }
    std::string detail = std::to_string(cases) + " generated cases";
    for (const auto& b : broken) {
        detail += "; broken: " + b;
    }
    return {broken.empty() && cases >= kPropertyCases, detail};
}

} // namespace

int main() {
    criterion(1, "HEET pipeline oracle", 1, heet_pipeline);
    criterion(2, "arithmetic mean under saturation", 30, saturation);
    criterion(3, "round-robin optimality", 60, round_robin);
    criterion(4, "harmonic mean with one busy machine", 10, one_busy);
    criterion(5, "weighted harmonic mean over task types", 10, weighted_harmonic);
    criterion(6, "deterministic prediction accuracy", 300, prediction_accuracy);
    criterion(7, "HEET beats entry-mean baselines", 300, baselines);
    criterion(8, "S-HEET orders simulated makespan", 300, ordering);
    criterion(9, "optimizer matches brute force", 300, optimizer);
    criterion(10, "invariant suite", 120, invariants);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
