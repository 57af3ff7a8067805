#pragma once

// Plot-ready CSV and JSON writers. Numbers use 17 significant digits, '.' as
// decimal separator and LF line endings; fare indices are 1-based.

#include <ostream>
#include <string>
#include <vector>

#include "rmadvice/experiment.hpp"
#include "rmadvice/fare_model.hpp"
#include "rmadvice/frontier.hpp"
#include "rmadvice/pareto_lp.hpp"
#include "rmadvice/policy.hpp"
#include "rmadvice/protection_optimizer.hpp"

namespace rmadvice {

/// Locale-independent, round-trippable formatting.
std::string format_number(double x);

void write_frontier_csv(std::ostream& out, const FrontierCurve& curve);

void write_rs_grid_csv(std::ostream& out, const std::vector<Advice>& grid,
                       const std::vector<double>& rs);

void write_trace_csv(std::ostream& out, const FareLadder& ladder, const PolicyTrace& trace);

void write_sweep_csv(std::ostream& out, const SweepResult& result);

void write_levels_json(std::ostream& out, const FareLadder& ladder, const ProtectionResult& result);

void write_lp_solution_json(std::ostream& out, const FareLadder& ladder, const Advice& advice,
                            const LpSolution& solution);

}  // namespace rmadvice
