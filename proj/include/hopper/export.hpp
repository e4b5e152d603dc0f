#pragma once

// CSV and JSON writers. CSVs carry a header row and full-precision numbers
// (shortest round-trip form); summaries use 4 significant figures.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopper/ballistics.hpp"
#include "hopper/control.hpp"
#include "hopper/planner.hpp"

namespace hopper::io {

using Json = nlohmann::ordered_json;

std::string brake_csv(const control::BrakeResponse& response);
std::string trajectory_csv(const ballistics::Trajectory& trajectory);
std::string sweep_csv(const planner::SweepTable& table);
std::string outcomes_csv(const std::vector<ballistics::JumpOutcome>& outcomes);
std::string stats_csv(const std::vector<ballistics::LandingStats>& stats);
std::string plan_table_csv(const std::vector<planner::PlanTableRow>& rows);
std::string mission_csv(const planner::MissionResult& result);

Json to_json(const planner::JumpPlan& plan);
Json to_json(const planner::MissionResult& result);
Json to_json(const control::ControllerDesign& design);

/// Number formatted to 4 significant figures.
std::string sig4(double value);

/// Writes `content` to `path`, creating parent directories.
/// Throws Error(kIo) on failure.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace hopper::io
