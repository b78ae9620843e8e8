// Wall-clock comparison of the OpenMP sweep kernels against their serial
// references. Usage: bench_sweep [max_count] [tasks] [repeats]

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>

#include <omp.h>

#include "heet/explorer.hpp"

using namespace heet;

namespace {

double seconds(const std::function<void()>& fn, int repeats) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return best;
}

void report(const std::string& name, double serial, double parallel, bool same) {
    std::cout << name << ": serial " << serial << " s, parallel " << parallel << " s, speedup "
              << serial / parallel << (same ? "" : "  RESULTS DIFFER") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t max_count = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 8;
    const std::size_t tasks = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 1000;
    const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

    const MachineCatalog catalog({"resnet50", "yolov5", "distilbert", "wav2vec2"},
                                 {{"t2.large", 0.0928, {0.95, 1.60, 0.70, 2.40}, max_count},
                                  {"c5.2xlarge", 0.34, {0.42, 0.75, 0.33, 1.10}, max_count},
                                  {"g4dn.xlarge", 0.526, {0.18, 0.26, 0.21, 0.45}, max_count}});
    const SweepSpec spec{WorkloadMix({0.4, 0.3, 0.2, 0.1}), 5.0, tasks};
    std::cout << catalog.config_count() << " configurations, " << tasks << " tasks, "
              << omp_get_max_threads() << " threads\n";

    std::vector<SweepRow> serial_rows, parallel_rows;
    const double sweep_serial_s = seconds([&] { serial_rows = sweep_serial(catalog, spec); }, repeats);
    const double sweep_parallel_s = seconds([&] { parallel_rows = sweep(catalog, spec); }, repeats);
    report("sweep", sweep_serial_s, sweep_parallel_s, serial_rows == parallel_rows);

    const auto noise = NoiseSpec::lognormal(0.2, 1);
    auto serial_sim = serial_rows;
    auto parallel_sim = parallel_rows;
    const double sim_serial_s =
        seconds([&] { attach_simulation_serial(serial_sim, catalog, spec, 7, noise); }, repeats);
    const double sim_parallel_s =
        seconds([&] { attach_simulation(parallel_sim, catalog, spec, 7, noise); }, repeats);
    report("attach_simulation", sim_serial_s, sim_parallel_s, serial_sim == parallel_sim);
    return serial_rows == parallel_rows && serial_sim == parallel_sim ? 0 : 1;
}
