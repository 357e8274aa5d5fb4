#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bearform/graph.hpp"
#include "bearform/scenario.hpp"
#include "bearform/sim.hpp"

namespace bearform {

/// Column names; depends only on the agent count and the edge list.
std::vector<std::string> csv_header(int agent_count, const std::vector<Edge>& edges);

/// One row per control tick, numbers printed with 17 significant digits.
void write_csv(std::ostream& out, const SimRecord& record);
std::string to_csv(const SimRecord& record);

nlohmann::ordered_json metrics_to_json(const MetricsSummary& metrics);

/// Summary document: generator, scenario echo and metrics.
nlohmann::ordered_json summary_json(const ScenarioFile& scenario, const SimRecord& record,
                            const MetricsSummary& metrics);

/// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string format_report(const ValidationReport& report);

}  // namespace bearform
