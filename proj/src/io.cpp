#include "heet/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "heet/errors.hpp"

namespace heet::io {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(std::string_view(line).substr(
            start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) {
            return fields;
        }
        start = comma + 1;
    }
}

double parse_number(const std::string& field, std::size_t line) {
    double value = 0;
    const char* begin = field.data();
    const char* end = field.data() + field.size();
    if (!field.empty() && *begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (field.empty() || ec != std::errc() || ptr != end) {
        throw ParseError("not a number: '" + field + "'", line);
    }
    return value;
}

std::string format_number(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

// Calls fn(fields, line_number) for every non-blank line.
template <typename Fn>
void for_each_csv_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty()) {
            continue;
        }
        fn(split_fields(line), number);
    }
}

template <typename T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad field '") + key + "': " + e.what());
    }
}

const char* event_name(EventKind kind) {
    switch (kind) {
        case EventKind::arrival: return "arrival";
        case EventKind::start: return "start";
        case EventKind::finish: return "finish";
    }
    return "unknown";
}

} // namespace

EetMatrix read_eet_csv(std::istream& in) {
    std::vector<std::string> machines;
    std::vector<std::string> tasks;
    std::vector<double> entries;
    bool have_header = false;
    for_each_csv_line(in, [&](const std::vector<std::string>& fields, std::size_t line) {
        if (!have_header) {
            if (fields.front() != "task") {
                throw ParseError("header must start with 'task'", line);
            }
            if (fields.size() < 2) {
                throw ParseError("header lists no machines", line);
            }
            machines.assign(fields.begin() + 1, fields.end());
            have_header = true;
            return;
        }
        if (fields.size() != machines.size() + 1) {
            throw ParseError("expected " + std::to_string(machines.size() + 1) + " fields, got " +
                                 std::to_string(fields.size()),
                             line);
        }
        tasks.push_back(fields.front());
        for (std::size_t k = 1; k < fields.size(); ++k) {
            entries.push_back(parse_number(fields[k], line));
        }
    });
    if (!have_header) {
        throw ParseError("empty EET file");
    }
    if (tasks.empty()) {
        throw ParseError("EET file has no task rows");
    }
    return EetMatrix(std::move(tasks), std::move(machines), std::move(entries));
}

void write_eet_csv(std::ostream& out, const EetMatrix& eet) {
    out << "task";
    for (const auto& label : eet.machine_labels()) {
        out << ',' << label;
    }
    out << '\n';
    for (std::size_t i = 0; i < eet.tasks(); ++i) {
        out << eet.task_labels()[i];
        for (double e : eet.row(i)) {
            out << ',' << format_number(e);
        }
        out << '\n';
    }
}

WorkloadMix parse_mix(const std::string& text) {
    std::vector<double> weights;
    for (const auto& f : split_fields(text)) {
        weights.push_back(parse_number(f, 0));
    }
    return WorkloadMix(std::move(weights));
}

WorkloadTrace read_trace_jsonl(std::istream& in) {
    std::vector<TaskArrival> records;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty()) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), number);
        }
        if (!j.is_object() || !j.contains("t") || !j.contains("type") || !j["t"].is_number() ||
            !j["type"].is_string()) {
            throw ParseError("expected {\"t\": <seconds>, \"type\": \"<label>\"}", number);
        }
        records.push_back({j["t"].get<double>(), j["type"].get<std::string>()});
    }
    return WorkloadTrace(std::move(records));
}

void write_trace_jsonl(std::ostream& out, const WorkloadTrace& trace) {
    for (const auto& r : trace.records()) {
        out << json{{"t", r.time}, {"type", r.type}}.dump() << '\n';
    }
}

ProfileSamples read_profile_csv(std::istream& in) {
    ProfileSamples samples;
    bool have_header = false;
    for_each_csv_line(in, [&](const std::vector<std::string>& fields, std::size_t line) {
        if (fields.size() != 3) {
            throw ParseError("expected 3 fields, got " + std::to_string(fields.size()), line);
        }
        if (!have_header) {
            if (fields[0] != "task" || fields[1] != "machine" || fields[2] != "sample_seconds") {
                throw ParseError("header must be 'task,machine,sample_seconds'", line);
            }
            have_header = true;
            return;
        }
        samples.add(fields[0], fields[1], parse_number(fields[2], line));
    });
    if (!have_header) {
        throw ParseError("empty profile file");
    }
    return samples;
}

MachineCatalog catalog_from_json(const json& j) {
    if (!j.is_object()) {
        throw ParseError("catalog must be a JSON object");
    }
    auto task_labels = field<std::vector<std::string>>(j, "task_labels");
    const auto machines = field<json>(j, "machines");
    if (!machines.is_array()) {
        throw ParseError("'machines' must be an array");
    }
    std::vector<MachineType> types;
    for (const auto& m : machines) {
        MachineType type;
        type.label = field<std::string>(m, "label");
        type.unit_cost = field<double>(m, "unit_cost");
        type.eet_column = field<std::vector<double>>(m, "eet");
        const auto max_count = field<long long>(m, "max_count");
        if (max_count < 0) {
            throw DomainError("machine type '" + type.label + "' has a negative max_count");
        }
        type.max_count = static_cast<std::size_t>(max_count);
        types.push_back(std::move(type));
    }
    return MachineCatalog(std::move(task_labels), std::move(types));
}

json catalog_to_json(const MachineCatalog& catalog) {
    json machines = json::array();
    for (const auto& t : catalog.types()) {
        machines.push_back({{"label", t.label},
                            {"unit_cost", t.unit_cost},
                            {"eet", t.eet_column},
                            {"max_count", t.max_count}});
    }
    return {{"task_labels", catalog.task_labels()}, {"machines", machines}};
}

json report_to_json(const HeetReport& report) {
    return {{"beta_bar", report.beta_bar},
            {"equiv_times", report.equiv_times},
            {"alpha_star", report.alpha_star},
            {"alpha_star_mean", report.alpha_star_mean},
            {"heet", report.heet},
            {"s_heet", report.s_heet},
            {"predicted_throughput", report.predicted_throughput},
            {"machines", report.machines}};
}

HeetReport report_from_json(const json& j) {
    HeetReport r;
    r.beta_bar = field<std::vector<double>>(j, "beta_bar");
    r.equiv_times = field<std::vector<double>>(j, "equiv_times");
    r.alpha_star = field<std::vector<double>>(j, "alpha_star");
    r.alpha_star_mean = field<double>(j, "alpha_star_mean");
    r.heet = field<double>(j, "heet");
    r.s_heet = field<double>(j, "s_heet");
    r.predicted_throughput = field<double>(j, "predicted_throughput");
    r.machines = field<std::size_t>(j, "machines");
    return r;
}

json sim_result_to_json(const SimResult& result) {
    json machines = json::array();
    for (const auto& m : result.per_machine) {
        machines.push_back({{"machine_index", m.machine_index},
                            {"busy_until", m.busy_until},
                            {"tasks_completed", m.tasks_completed},
                            {"busy_time", m.busy_time}});
    }
    return {{"makespan", result.makespan},
            {"throughput", result.throughput},
            {"completed", result.completed},
            {"per_machine", machines}};
}

void write_events_jsonl(std::ostream& out, const SimResult& result) {
    for (const auto& e : result.events) {
        json j{{"t", e.time}, {"event", event_name(e.kind)}, {"task_id", e.task_id}};
        j["machine"] = e.machine ? json(*e.machine) : json(nullptr);
        out << j.dump() << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const MachineCatalog& catalog,
                     const std::vector<SweepRow>& rows) {
    const bool simulated = !rows.empty() && rows.front().simulated_makespan.has_value();
    for (const auto& t : catalog.types()) {
        out << t.label << ',';
    }
    out << "n,heet,s_heet,theta,tau,cost,meets_target";
    if (simulated) {
        out << ",measured_tau,measured_theta";
    }
    out << '\n';
    for (const auto& row : rows) {
        for (auto count : row.config.counts) {
            out << count << ',';
        }
        out << row.config.machines() << ',' << format_number(row.heet) << ','
            << format_number(row.s_heet) << ',' << format_number(row.throughput) << ','
            << format_number(row.makespan) << ',' << format_number(row.cost) << ','
            << (row.meets_target ? "true" : "false");
        if (simulated) {
            out << ',' << format_number(row.simulated_makespan.value_or(0)) << ','
                << format_number(row.simulated_throughput.value_or(0));
        }
        out << '\n';
    }
}

json sweep_row_to_json(const MachineCatalog& catalog, const SweepRow& row) {
    json counts = json::object();
    for (std::size_t t = 0; t < catalog.size(); ++t) {
        counts[catalog.types()[t].label] = row.config.counts[t];
    }
    json j{{"counts", counts},
           {"n", row.config.machines()},
           {"heet", row.heet},
           {"s_heet", row.s_heet},
           {"theta", row.throughput},
           {"tau", row.makespan},
           {"cost", row.cost},
           {"meets_target", row.meets_target}};
    if (row.simulated_makespan) {
        j["measured_tau"] = *row.simulated_makespan;
        j["measured_theta"] = *row.simulated_throughput;
    }
    return j;
}

json lemma_check_to_json(const LemmaCheck& check) {
    return {{"name", check.name},           {"passed", check.passed},
            {"instances", check.instances}, {"failures", check.failures},
            {"worst", check.worst},         {"tolerance", check.tolerance},
            {"detail", check.detail}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace heet::io
