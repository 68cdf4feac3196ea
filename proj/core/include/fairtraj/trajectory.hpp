#pragma once

#include <Eigen/Core>
#include <tuple>
#include <utility>

#include "fairtraj/allocation.hpp"
#include "fairtraj/channel.hpp"
#include "fairtraj/scenario.hpp"

namespace fairtraj {

/// First-order expansion of every user/slot rate around the iterate
/// (q^r, Theta^r), for fixed allocation. The surrogate
///   base - psi*(e^-Theta - e^-Theta_ref) - phi*(||q-w||^2 - ||q_ref-w||^2)
/// is concave in (q, Theta), equals the base value at the iterate, and
/// lower-bounds the true rate wherever Theta <= b1 + b2*theta(q).
struct ScaExpansion {
    std::vector<Eigen::Vector2d> users;
    double altitude = 0.0;
    Trajectory q_ref;
    Eigen::MatrixXd theta_ref;   // slack iterate Theta^r, K x N
    Eigen::MatrixXd base;        // rate at the iterate with Theta^r in the logistic
    Eigen::MatrixXd psi;         // >= 0
    Eigen::MatrixXd phi;         // >= 0
    Eigen::MatrixXd x0;          // 1 + e^-Theta^r
    Eigen::MatrixXd y0;          // H^2 + ||q^r - w||^2
    Eigen::MatrixXd gamma_hat;   // gamma0 * p / b (0 for inactive users)
    Eigen::MatrixXd sq_dist_ref; // ||q^r - w||^2

    /// Concave lower bound on the elevation ratio at q, linear in
    /// ||q - w||^2, tight at q^r.
    double theta_lower_bound(int k, int n, const Eigen::Vector2d& q) const;
};

ScaExpansion build_expansion(const Scenario& scenario, const Allocation& allocation,
                             const Trajectory& q_ref, const Eigen::MatrixXd& theta_ref);

double lower_bound_rate(const ScaExpansion& expansion, int k, int n,
                        const Eigen::Vector2d& q, double theta_slack);

/// One convex SCA step of the alpha-weighted trajectory subproblem.
/// Keeps endpoints fixed, respects per-slot speed limits and the slack
/// constraint Theta <= b1 + b2*theta_lb. The returned slack matrix is
/// refreshed to b1 + b2*theta(q) on the new trajectory so the next
/// expansion is tight. Never decreases the true objective: if the step
/// does not improve, the incoming iterate is returned unchanged.
std::pair<Trajectory, Eigen::MatrixXd> solve_trajectory_step(
    const Scenario& scenario, const Allocation& allocation, const Trajectory& q_ref,
    const Eigen::MatrixXd& theta_ref, double alpha, double tol);

/// Max-min variant with per-slot epigraph variables eta_n; the returned
/// eta equals the per-slot minimum surrogate rate at the solution.
std::tuple<Trajectory, Eigen::MatrixXd, Eigen::VectorXd> solve_maxmin_trajectory_step(
    const Scenario& scenario, const Allocation& allocation, const Trajectory& q_ref,
    const Eigen::MatrixXd& theta_ref, double tol);

/// Straight-line interpolation from q_initial to q_final, with the slack
/// initialized to b1 + b2*theta on that line.
std::pair<Trajectory, Eigen::MatrixXd> initial_trajectory(const Scenario& scenario);

/// b1 + b2 * theta_k[n] evaluated on a trajectory (the tight slack).
Eigen::MatrixXd exact_slack(const Scenario& scenario, const Trajectory& trajectory);

}  // namespace fairtraj
