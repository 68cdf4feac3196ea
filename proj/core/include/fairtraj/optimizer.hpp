#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairtraj/allocation.hpp"
#include "fairtraj/channel.hpp"
#include "fairtraj/fairness.hpp"
#include "fairtraj/scenario.hpp"

namespace fairtraj {

enum class Termination { Tolerance, IterLimit };

struct SolveReport {
    std::vector<double> objective_trace;  // V^0 ... V^r, nondecreasing
    Allocation allocation;
    Trajectory trajectory;
    Eigen::MatrixXd rates;
    Eigen::VectorXd per_user_throughput;  // time-averaged, K entries [bps/Hz]
    double system_throughput = 0.0;       // final objective value
    FairnessMetrics metrics;
    double alpha = 0.0;
    Termination termination = Termination::IterLimit;
    bool condition1_held = true;
    int iterations = 0;
    double wall_time_s = 0.0;
};

/// Alternating ascent for finite alpha: initialize with the uniform
/// allocation and straight-line trajectory, then alternate the per-slot
/// allocation solve and one SCA trajectory step until the exact
/// objective changes by at most eps or r_max rounds elapse.
SolveReport run_algorithm1(const Scenario& scenario, double alpha, double eps = 1e-4,
                           int r_max = 50);

/// Same alternation with the max-min allocation and trajectory solvers.
SolveReport run_maxmin(const Scenario& scenario, double eps = 1e-4, int r_max = 50);

struct SweepEntry {
    double alpha = 0.0;  // infinity for the max-min run
    std::optional<SolveReport> report;
    std::optional<std::string> error;  // set when the run failed
};

/// Independent run per alpha (ascending), optionally followed by one
/// max-min run. Failures are collected per entry; the sweep continues.
std::vector<SweepEntry> alpha_sweep(const Scenario& scenario, const std::vector<double>& alphas,
                                    double eps = 1e-4, int r_max = 50,
                                    bool include_maxmin = false);

}  // namespace fairtraj
