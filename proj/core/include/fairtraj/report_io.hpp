#pragma once

#include <string>
#include <vector>

#include "fairtraj/optimizer.hpp"

namespace fairtraj {

/// Formats with 12 significant digits (all emitted floats).
std::string format_double(double value);

/// Writes trajectory.csv, allocation.csv, rates.csv and summary.json
/// into dir (created if absent). Rates below kRateReportFloor are
/// written as 0. Throws IoError with path context.
void emit_report(const SolveReport& report, const std::string& dir);

/// Writes sweep.csv: one row per entry (alpha, system_throughput,
/// variance, jain_index, iterations, status).
void emit_sweep(const std::vector<SweepEntry>& entries, const std::string& dir);

std::string summary_json(const SolveReport& report);

}  // namespace fairtraj
