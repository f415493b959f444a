#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualtree/bounds.hpp"
#include "dualtree/brute_force.hpp"
#include "dualtree/cover_tree.hpp"
#include "dualtree/traversal.hpp"

namespace dualtree {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json counters_to_json(const TraversalCounters& counters);

// Bound reports mark the theta and pre-recursion estimates as surrogate
// values (big-O constants taken as one); monochromatic reports omit the
// theta field entirely.
nlohmann::json bound_report_to_json(const BoundReport& report);

nlohmann::json tree_stats_to_json(const TreeStats& stats);

// CSV layouts (fixed column order):
//   neighbors:  query_id,neighbor_id,distance
//   estimates:  query_id,estimate
std::string neighbors_to_csv(std::span<const NeighborAnswer> answers);
std::string estimates_to_csv(std::span<const double> estimates);

/// Line-delimited JSON: {"query": id, "ids": [...]} per query point.
std::string range_results_to_jsonl(
    const std::vector<std::vector<int>>& results);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dualtree
