#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "heet/eet.hpp"
#include "heet/explorer.hpp"
#include "heet/lemmas.hpp"
#include "heet/simulator.hpp"
#include "heet/workload.hpp"

namespace heet::io {

using nlohmann::json;

// EET CSV: header `task,<machine>,...`, then one row per task type.
EetMatrix read_eet_csv(std::istream& in);
void write_eet_csv(std::ostream& out, const EetMatrix& eet);

// Comma-separated weights, e.g. "0.25,0.25,0.5".
WorkloadMix parse_mix(const std::string& text);

// JSON-lines, one {"t": seconds, "type": label} per record.
WorkloadTrace read_trace_jsonl(std::istream& in);
void write_trace_jsonl(std::ostream& out, const WorkloadTrace& trace);

// CSV `task,machine,sample_seconds` with that header.
ProfileSamples read_profile_csv(std::istream& in);

// {"task_labels": [...], "machines": [{"label", "unit_cost", "eet", "max_count"}]}
MachineCatalog catalog_from_json(const json& j);
json catalog_to_json(const MachineCatalog& catalog);

json report_to_json(const HeetReport& report);
HeetReport report_from_json(const json& j);

json sim_result_to_json(const SimResult& result);
// JSON-lines {t, event, task_id, machine}; machine is null for arrivals.
void write_events_jsonl(std::ostream& out, const SimResult& result);

// Columns: one count per catalog type, n, heet, s_heet, theta, tau, cost,
// meets_target, and measured_tau/measured_theta when simulated.
void write_sweep_csv(std::ostream& out, const MachineCatalog& catalog,
                     const std::vector<SweepRow>& rows);
json sweep_row_to_json(const MachineCatalog& catalog, const SweepRow& row);

json lemma_check_to_json(const LemmaCheck& check);

// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_file(const std::string& path);

} // namespace heet::io
