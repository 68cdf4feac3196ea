#pragma once

#include <Eigen/Core>

#include "fairtraj/channel.hpp"
#include "fairtraj/scenario.hpp"

namespace fairtraj {

/// K x N bandwidth and power fractions. Per slot, each column sums to at
/// most 1 in both b and p, entries in [0,1].
struct Allocation {
    Eigen::MatrixXd b;
    Eigen::MatrixXd p;

    static Allocation uniform(int num_users, int num_slots);
    bool feasible(double tol = 1e-9) const;
};

/// Solvers keep b away from the log singularity; output values below
/// kRateReportFloor are reported as exactly 0.
constexpr double kBandwidthFloor = 1e-9;
constexpr double kRateReportFloor = 1e-7;

/// Per-slot maximization of the alpha-weighted sum of user rates over
/// the bandwidth/power simplex, for a fixed trajectory. Slots are
/// independent and solved separately.
Allocation solve_weighted_allocation(const Scenario& scenario, const Trajectory& trajectory,
                                     double alpha, double tol);

/// Per-slot max-min rate allocation via the epigraph variable eta_n; at
/// the optimum all K rates in a slot are equal.
Allocation solve_maxmin_allocation(const Scenario& scenario, const Trajectory& trajectory,
                                   double tol);

/// The exact objective: (1/N) sum_n H_alpha(R_1[n],...,R_K[n]), or the
/// per-slot minimum averaged over slots when alpha is the max-min value.
/// Single source of truth for the outer loop's objective trace.
double allocation_objective(const Scenario& scenario, const Trajectory& trajectory,
                            const Allocation& allocation, double alpha);

/// Same objective evaluated from a precomputed rate matrix.
double objective_from_rates(const Eigen::MatrixXd& rates, double alpha);

}  // namespace fairtraj
