#include "fairtraj/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "fairtraj/errors.hpp"
#include "fairtraj/trajectory.hpp"

namespace fairtraj {

namespace {

constexpr double kAllocationTol = 1e-8;
constexpr double kTrajectoryTol = 1e-6;

SolveReport run_alternation(const Scenario& scenario, double alpha, double eps, int r_max) {
    const auto t_start = std::chrono::steady_clock::now();
    const bool maxmin = is_maxmin(alpha);

    Allocation alloc = Allocation::uniform(scenario.num_users(), scenario.slots);
    auto [traj, theta] = initial_trajectory(scenario);

    SolveReport report;
    report.alpha = alpha;
    double v_prev = allocation_objective(scenario, traj, alloc, alpha);
    report.objective_trace.push_back(v_prev);

    int r = 0;
    Termination termination = Termination::IterLimit;
    while (r < r_max) {
        ++r;
        // Allocation block. The per-slot solve is a global concave
        // maximization, but guard against tolerance-level regressions so
        // the trace stays monotone.
        Allocation alloc_new;
        try {
            alloc_new = maxmin ? solve_maxmin_allocation(scenario, traj, kAllocationTol)
                               : solve_weighted_allocation(scenario, traj, alpha, kAllocationTol);
        } catch (const SolverFailure& failure) {
            throw SolverFailure(std::string(failure.what()) + " (round " + std::to_string(r) +
                                    ")",
                                failure.slot, r);
        }
        if (allocation_objective(scenario, traj, alloc_new, alpha) >=
            allocation_objective(scenario, traj, alloc, alpha)) {
            alloc = std::move(alloc_new);
        }

        // Trajectory block: one SCA step (monotone by construction).
        try {
            if (maxmin) {
                auto [q_next, theta_next, eta] =
                    solve_maxmin_trajectory_step(scenario, alloc, traj, theta, kTrajectoryTol);
                traj = std::move(q_next);
                theta = std::move(theta_next);
            } else {
                auto [q_next, theta_next] =
                    solve_trajectory_step(scenario, alloc, traj, theta, alpha, kTrajectoryTol);
                traj = std::move(q_next);
                theta = std::move(theta_next);
            }
        } catch (const SolverFailure& failure) {
            throw SolverFailure(std::string(failure.what()) + " (round " + std::to_string(r) +
                                    ")",
                                failure.slot, r);
        }

        const double v = allocation_objective(scenario, traj, alloc, alpha);
        report.objective_trace.push_back(v);
        if (std::abs(v - v_prev) <= eps) {
            termination = Termination::Tolerance;
            break;
        }
        v_prev = v;
    }

    report.allocation = alloc;
    report.trajectory = traj;
    report.rates = rate_matrix(scenario, traj, alloc);
    report.per_user_throughput = report.rates.rowwise().mean();
    report.system_throughput = report.objective_trace.back();
    report.metrics = fairness_metrics(report.per_user_throughput);
    report.termination = termination;
    report.condition1_held = maxmin || check_condition1(report.rates, alpha).holds;
    report.iterations = r;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

}  // namespace

SolveReport run_algorithm1(const Scenario& scenario, double alpha, double eps, int r_max) {
    if (is_maxmin(alpha)) {
        throw SolverFailure("run_algorithm1 requires finite alpha; use run_maxmin");
    }
    return run_alternation(scenario, alpha, eps, r_max);
}

SolveReport run_maxmin(const Scenario& scenario, double eps, int r_max) {
    return run_alternation(scenario, kAlphaMaxMin, eps, r_max);
}

std::vector<SweepEntry> alpha_sweep(const Scenario& scenario, const std::vector<double>& alphas,
                                    double eps, int r_max, bool include_maxmin) {
    std::vector<SweepEntry> entries;
    auto run_one = [&](double alpha) {
        SweepEntry entry;
        entry.alpha = alpha;
        try {
            entry.report = is_maxmin(alpha) ? run_maxmin(scenario, eps, r_max)
                                            : run_algorithm1(scenario, alpha, eps, r_max);
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
    };
    for (double alpha : alphas) run_one(alpha);
    if (include_maxmin) run_one(kAlphaMaxMin);
    return entries;
}

}  // namespace fairtraj
