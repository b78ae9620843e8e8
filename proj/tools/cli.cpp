#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "heet/eet.hpp"
#include "heet/errors.hpp"
#include "heet/explorer.hpp"
#include "heet/io.hpp"
#include "heet/lemmas.hpp"
#include "heet/simulator.hpp"
#include "heet/workload.hpp"

namespace heet::cli {

namespace {

using io::json;

struct RunSpec {
    std::string eet_path;
    std::string trace_path;
    std::string catalog_path;
    std::string profile_path;
    std::string mix;
    std::string labels;
    double target = 0;
    std::size_t tasks = 1000;
    std::uint64_t seed = kDefaultSeed;
    double noise_cov = 0;
    double rate = 0;
    std::string out_path;
    std::string event_log_path;
    bool simulate = false;

    LemmaOptions lemmas;
};

EetMatrix load_eet(const std::string& path) {
    std::istringstream in(io::read_file(path));
    return io::read_eet_csv(in);
}

WorkloadMix mix_for(const RunSpec& spec, std::size_t task_types) {
    if (spec.mix.empty()) {
        return WorkloadMix::uniform(task_types);
    }
    auto mix = io::parse_mix(spec.mix);
    if (mix.size() != task_types) {
        throw DomainError("--mix has " + std::to_string(mix.size()) + " weights for " +
                          std::to_string(task_types) + " task types");
    }
    return mix;
}

MachineCatalog load_catalog(const std::string& path) {
    json j;
    try {
        j = json::parse(io::read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError("catalog '" + path + "': " + e.what());
    }
    return io::catalog_from_json(j);
}

// Writes text to --out when given, otherwise to `fallback`.
void emit(const RunSpec& spec, const std::string& text, std::ostream& fallback) {
    if (spec.out_path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream file(spec.out_path, std::ios::binary);
    if (!file) {
        throw ParseError("cannot write '" + spec.out_path + "'");
    }
    file << text;
}

NoiseSpec noise_for(const RunSpec& spec) {
    if (spec.noise_cov < 0) {
        throw DomainError("--noise-cov must be non-negative");
    }
    return spec.noise_cov > 0 ? NoiseSpec::lognormal(spec.noise_cov, spec.seed) : NoiseSpec::off();
}

int cmd_heet(const RunSpec& spec, std::ostream& out) {
    const auto eet = load_eet(spec.eet_path);
    const auto report = heet_score(eet, mix_for(spec, eet.tasks()));
    auto j = io::report_to_json(report);
    j["tasks"] = spec.tasks;
    j["predicted_makespan"] = predict_makespan(report, spec.tasks, eet.machines());
    j["task_labels"] = eet.task_labels();
    j["machine_labels"] = eet.machine_labels();
    emit(spec, j.dump(2) + "\n", out);
    return kOk;
}

int cmd_predict(const RunSpec& spec, std::ostream& out) {
    const auto eet = load_eet(spec.eet_path);
    const std::size_t n = eet.machines();
    const auto report = heet_score(eet, mix_for(spec, eet.tasks()));
    const auto means = baseline_means(eet);
    auto baseline = [&](double mean) {
        return json{{"mean", mean},
                    {"tau", makespan_from_mean(mean, spec.tasks, n)},
                    {"theta", static_cast<double>(n) / mean}};
    };
    json j{{"tasks", spec.tasks},
           {"machines", n},
           {"heet", report.heet},
           {"s_heet", report.s_heet},
           {"tau", predict_makespan(report, spec.tasks, n)},
           {"theta", predict_throughput(report, n)},
           {"baselines",
            {{"arithmetic", baseline(means.arithmetic)},
             {"harmonic", baseline(means.harmonic)},
             {"geometric", baseline(means.geometric)}}}};
    emit(spec, j.dump(2) + "\n", out);
    return kOk;
}

int cmd_simulate(const RunSpec& spec, std::ostream& out) {
    const auto eet = load_eet(spec.eet_path);
    std::istringstream trace_in(io::read_file(spec.trace_path));
    const auto trace = io::read_trace_jsonl(trace_in);

    SimOptions options;
    options.noise = noise_for(spec);
    options.record_events = !spec.event_log_path.empty();
    const auto result = simulate(eet, trace, options);

    out << "makespan " << result.makespan << "\n";
    out << "throughput " << result.throughput << "\n";
    if (!spec.out_path.empty()) {
        emit(spec, io::sim_result_to_json(result).dump(2) + "\n", out);
    }
    if (options.record_events) {
        std::ofstream log(spec.event_log_path, std::ios::binary);
        if (!log) {
            throw ParseError("cannot write '" + spec.event_log_path + "'");
        }
        io::write_events_jsonl(log, result);
    }
    return kOk;
}

int cmd_validate(const RunSpec& spec, std::ostream& out) {
    LemmaOptions options = spec.lemmas;
    options.tasks = spec.tasks;
    options.seed = spec.seed;
    const auto checks = validate_lemmas(options);

    json report = json::array();
    bool all_passed = true;
    for (const auto& check : checks) {
        out << (check.passed ? "PASS " : "FAIL ") << check.name << " (" << check.instances
            << " instances, " << check.failures << " failures, worst " << check.worst << ")";
        if (!check.detail.empty()) {
            out << ": " << check.detail;
        }
        out << "\n";
        all_passed = all_passed && check.passed;
        report.push_back(io::lemma_check_to_json(check));
    }
    if (!spec.out_path.empty()) {
        emit(spec, json{{"passed", all_passed}, {"checks", report}}.dump(2) + "\n", out);
    }
    return all_passed ? kOk : kCheckFailed;
}

std::vector<SweepRow> run_sweep(const RunSpec& spec, const MachineCatalog& catalog) {
    const SweepSpec sweep_spec{mix_for(spec, catalog.task_labels().size()), spec.target, spec.tasks};
    auto rows = sweep(catalog, sweep_spec);
    if (spec.simulate) {
        attach_simulation(rows, catalog, sweep_spec, spec.seed, noise_for(spec));
    }
    return rows;
}

int cmd_sweep(const RunSpec& spec, std::ostream& out) {
    const auto catalog = load_catalog(spec.catalog_path);
    const auto rows = run_sweep(spec, catalog);
    std::ostringstream csv;
    io::write_sweep_csv(csv, catalog, rows);
    emit(spec, csv.str(), out);
    return kOk;
}

int cmd_optimize(const RunSpec& spec, std::ostream& out) {
    const auto catalog = load_catalog(spec.catalog_path);
    const auto rows = run_sweep(spec, catalog);
    const auto best = optimize(rows, spec.target);
    json j{{"target", spec.target},
           {"tasks", spec.tasks},
           {"configurations", rows.size()},
           {"optimum", best ? io::sweep_row_to_json(catalog, *best) : json(nullptr)}};
    emit(spec, j.dump(2) + "\n", out);
    return kOk;
}

int cmd_synth(const RunSpec& spec, std::ostream& out) {
    std::vector<std::string> labels;
    if (!spec.eet_path.empty()) {
        labels = load_eet(spec.eet_path).task_labels();
    } else if (!spec.labels.empty()) {
        std::stringstream in(spec.labels);
        for (std::string label; std::getline(in, label, ',');) {
            labels.push_back(label);
        }
    } else {
        throw ParseError("synth-workload needs --eet or --labels");
    }
    const auto mix = mix_for(spec, labels.size());
    const auto trace = spec.rate > 0 ? synth_poisson_trace(spec.rate, spec.tasks, mix, labels, spec.seed)
                                     : synth_bag(spec.tasks, mix, labels, spec.seed);
    std::ostringstream text;
    io::write_trace_jsonl(text, trace);
    emit(spec, text.str(), out);
    return kOk;
}

int cmd_ingest(const RunSpec& spec, std::ostream& out) {
    std::istringstream in(io::read_file(spec.profile_path));
    const auto eet = ingest_profile(io::read_profile_csv(in));
    std::ostringstream text;
    io::write_eet_csv(text, eet);
    emit(spec, text.str(), out);
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heterogeneity measurement, prediction and configuration search for clusters "
                 "described by an expected-execution-time matrix"};
    app.set_config("--config", "", "TOML/INI file with default flag values");
    app.require_subcommand(1);

    RunSpec spec;
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", spec.out_path, "Output file (default: standard output)");
    };
    auto add_mix = [&](CLI::App* sub) {
        sub->add_option("--mix", spec.mix, "Comma-separated task-type weights (default: uniform)");
    };
    auto add_tasks = [&](CLI::App* sub) {
        sub->add_option("--tasks", spec.tasks, "Number of tasks c")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    };
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", spec.seed, "Seed for every random stream")->capture_default_str();
    };

    auto* heet_cmd = app.add_subcommand("heet", "Compute the HEET report of an EET matrix");
    heet_cmd->add_option("--eet", spec.eet_path, "EET CSV")->required();
    add_mix(heet_cmd);
    add_tasks(heet_cmd);
    add_out(heet_cmd);

    auto* predict_cmd = app.add_subcommand("predict", "Predict makespan and throughput, with baselines");
    predict_cmd->add_option("--eet", spec.eet_path, "EET CSV")->required();
    add_mix(predict_cmd);
    add_tasks(predict_cmd);
    add_out(predict_cmd);

    auto* simulate_cmd = app.add_subcommand("simulate", "Run a trace through the FCFS simulator");
    simulate_cmd->add_option("--eet", spec.eet_path, "EET CSV")->required();
    simulate_cmd->add_option("--trace", spec.trace_path, "Trace JSON-lines")->required();
    simulate_cmd->add_option("--noise-cov", spec.noise_cov, "Lognormal noise coefficient of variation");
    simulate_cmd->add_option("--event-log", spec.event_log_path, "Write the per-event JSON-lines log here");
    add_seed(simulate_cmd);
    add_out(simulate_cmd);

    auto* validate_cmd = app.add_subcommand("validate-lemmas", "Check the speedup lemmas on random instances");
    validate_cmd->add_option("--trials", spec.lemmas.trials, "Instances per check")->capture_default_str();
    validate_cmd->add_option("--min-machines", spec.lemmas.min_machines)->capture_default_str();
    validate_cmd->add_option("--max-machines", spec.lemmas.max_machines)->capture_default_str();
    add_tasks(validate_cmd);
    add_seed(validate_cmd);
    add_out(validate_cmd);

    std::vector<CLI::App*> explorer_cmds{
        app.add_subcommand("sweep", "Score every configuration of a machine catalog (CSV)"),
        app.add_subcommand("optimize", "Cheapest configuration meeting a throughput target (JSON)")};
    for (auto* sub : explorer_cmds) {
        sub->add_option("--catalog", spec.catalog_path, "Catalog JSON")->required();
        sub->add_option("--target", spec.target, "Throughput target, tasks/s")->required();
        sub->add_flag("--simulate", spec.simulate, "Also simulate a bag of --tasks tasks per configuration");
        sub->add_option("--noise-cov", spec.noise_cov, "Noise for --simulate");
        add_mix(sub);
        add_tasks(sub);
        add_seed(sub);
        add_out(sub);
    }

    auto* synth_cmd = app.add_subcommand("synth-workload", "Generate a bag or Poisson trace");
    synth_cmd->add_option("--eet", spec.eet_path, "Take task labels from this EET CSV");
    synth_cmd->add_option("--labels", spec.labels, "Comma-separated task labels");
    synth_cmd->add_option("--rate", spec.rate, "Poisson arrival rate, tasks/s (omit for a bag)");
    add_mix(synth_cmd);
    add_tasks(synth_cmd);
    add_seed(synth_cmd);
    add_out(synth_cmd);

    auto* ingest_cmd = app.add_subcommand("ingest-profile", "Average profile samples into an EET CSV");
    ingest_cmd->add_option("--profile", spec.profile_path, "CSV task,machine,sample_seconds")->required();
    add_out(ingest_cmd);

    std::vector<char*> argv;
    std::vector<std::string> storage(args);
    for (auto& a : storage) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParseError;
    }

    try {
        if (heet_cmd->parsed()) return cmd_heet(spec, out);
        if (predict_cmd->parsed()) return cmd_predict(spec, out);
        if (simulate_cmd->parsed()) return cmd_simulate(spec, out);
        if (validate_cmd->parsed()) return cmd_validate(spec, out);
        if (explorer_cmds[0]->parsed()) return cmd_sweep(spec, out);
        if (explorer_cmds[1]->parsed()) return cmd_optimize(spec, out);
        if (synth_cmd->parsed()) return cmd_synth(spec, out);
        if (ingest_cmd->parsed()) return cmd_ingest(spec, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
    return kParseError;
}

} // namespace heet::cli
