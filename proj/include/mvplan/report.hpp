// Run reports with canonical JSON serialization: fixed field order, fixed
// float formatting, no locale dependence. Two runs reaching identical
// results serialize identically except for elapsed_seconds in checkpoints.
#pragma once

#include <optional>
#include <string>

#include "mvplan/kripke.hpp"
#include "mvplan/planner.hpp"

namespace mvp {

struct RunReport {
    std::string scenario_path;
    std::string rules_path;
    PlannerConfig config;       // as requested
    double gamma_resolved = 0;  // values actually used
    double ds_resolved = 0;
    std::vector<Checkpoint> checkpoints;
    KripkeStructure kripke;
    std::optional<Solution> solution;
};

RunReport make_report(const Planner& p, std::string scenario_path, std::string rules_path);

// Throws if the checkpoint sequence is not monotone (a later best worse
// than an earlier one would mean the planner lost a solution).
std::string report_to_json(const RunReport& r);

// Just the solution object; the surface the determinism guarantee covers.
std::string solution_to_json(const std::optional<Solution>& s);

void write_text_file(const std::string& path, const std::string& content);

// Canonical float formatting used across reports ("%.12g", "-0" normalized).
std::string fmt_double(double v);

}  // namespace mvp
