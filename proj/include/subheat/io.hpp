#pragma once

#include <string>

#include "json.hpp"
#include "subheat/harness.hpp"

namespace subheat {

// One row per recorded sample; header fixed as t,sup_norm,energy_y,dt.
// The energy column stays blank when no energy was tracked.
void write_trace_csv(const std::string& path, const SolveTrace& trace);

// Plot-ready profile slices: u along first-stratum axis 0 through the
// center of all other axes, one row per (snapshot time, node).
void write_slices_csv(const std::string& path, const SolveTrace& trace);

// Structured summary with a fixed field order, so identical runs produce
// byte-identical output. Non-finite numbers serialize as null.
nlohmann::ordered_json summary_json(const ScenarioResult& result);

// summary_json plus the wall-clock timing field, written to path.
void write_summary_json(const std::string& path, const ScenarioResult& result,
                        double wall_seconds);

}  // namespace subheat
