#include "fairtraj/trajectory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fairtraj/convex_core.hpp"
#include "fairtraj/errors.hpp"
#include "fairtraj/fairness.hpp"

namespace fairtraj {

namespace {

const double kLog2e = 1.0 / std::log(2.0);
constexpr double kInteriorMargin = 1e-6;  // strict-interior shift of the slack start
constexpr double kAscentSlack = 1e-12;

// Variable layout of the step programs:
//   z[0 .. 2*(N-2))   interior positions q[1..N-2] as (x, y) pairs
//   z[.. + K*N)       slack variables Theta, column-major (k + K*n)
//   z[.. + N)         epigraph eta (max-min variant only)
struct Layout {
    int k_count, n_count;
    int theta_offset() const { return 2 * (n_count - 2); }
    int eta_offset() const { return theta_offset() + k_count * n_count; }
    int theta_index(int k, int n) const { return theta_offset() + k + k_count * n; }
    bool interior(int n) const { return n > 0 && n < n_count - 1; }
    int q_index(int n) const { return 2 * (n - 1); }
};

Eigen::Vector2d slot_position(const Layout& lay, const Eigen::VectorXd& z, const Scenario& scn,
                              int n) {
    if (n == 0) return scn.q_initial;
    if (n == lay.n_count - 1) return scn.q_final;
    return {z[lay.q_index(n)], z[lay.q_index(n) + 1]};
}

Eigen::MatrixXd surrogate_rates(const ScaExpansion& exp, const Scenario& scn, const Layout& lay,
                                const Eigen::VectorXd& z) {
    Eigen::MatrixXd r(lay.k_count, lay.n_count);
    for (int n = 0; n < lay.n_count; ++n) {
        const Eigen::Vector2d q = slot_position(lay, z, scn, n);
        for (int k = 0; k < lay.k_count; ++k) {
            r(k, n) = lower_bound_rate(exp, k, n, q, z[lay.theta_index(k, n)]);
        }
    }
    return r;
}

// Per-slot speed limits plus the slack bound Theta <= b1 + b2*theta_lb(q).
void add_common_constraints(SmoothProgram& prog, const ScaExpansion& exp, const Scenario& scn,
                            const Layout& lay) {
    const double step = scn.v_max * scn.slot_length();
    const double step_sq = step * step;
    const int dim = prog.dimension;
    for (int n = 0; n + 1 < lay.n_count; ++n) {
        prog.inequalities.push_back(
            [n, step_sq, dim, lay, &scn](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
                const Eigen::Vector2d a = slot_position(lay, z, scn, n);
                const Eigen::Vector2d b = slot_position(lay, z, scn, n + 1);
                const Eigen::Vector2d diff = b - a;
                if (grad) {
                    grad->setZero(dim);
                    if (lay.interior(n)) {
                        (*grad)[lay.q_index(n)] = -2.0 * diff.x();
                        (*grad)[lay.q_index(n) + 1] = -2.0 * diff.y();
                    }
                    if (lay.interior(n + 1)) {
                        (*grad)[lay.q_index(n + 1)] = 2.0 * diff.x();
                        (*grad)[lay.q_index(n + 1) + 1] = 2.0 * diff.y();
                    }
                }
                return diff.squaredNorm() - step_sq;
            });
    }
    const double b1 = scn.rician.b1;
    const double b2 = scn.rician.b2;
    for (int n = 0; n < lay.n_count; ++n) {
        for (int k = 0; k < lay.k_count; ++k) {
            // g = Theta - b1 - b2*(t0 - c*(||q-w||^2 - sq_ref)) <= 0
            const double y0 = exp.y0(k, n);
            const double t0 = scn.altitude / std::sqrt(y0);
            const double c = scn.altitude / (2.0 * y0 * std::sqrt(y0));
            const double sq_ref = exp.sq_dist_ref(k, n);
            const Eigen::Vector2d w = scn.users[k];
            prog.inequalities.push_back([k, n, t0, c, sq_ref, b1, b2, w, dim, lay,
                                         &scn](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
                const Eigen::Vector2d diff = slot_position(lay, z, scn, n) - w;
                if (grad) {
                    grad->setZero(dim);
                    (*grad)[lay.theta_index(k, n)] = 1.0;
                    if (lay.interior(n)) {
                        (*grad)[lay.q_index(n)] = 2.0 * b2 * c * diff.x();
                        (*grad)[lay.q_index(n) + 1] = 2.0 * b2 * c * diff.y();
                    }
                }
                return z[lay.theta_index(k, n)] - b1 -
                       b2 * (t0 - c * (diff.squaredNorm() - sq_ref));
            });
        }
    }
}

Eigen::VectorXd pack_start(const ScaExpansion& exp, const Scenario& scn, const Layout& lay,
                           int extra) {
    Eigen::VectorXd z(lay.eta_offset() + extra);
    for (int n = 1; n + 1 < lay.n_count; ++n) {
        z[lay.q_index(n)] = exp.q_ref.q[n].x();
        z[lay.q_index(n) + 1] = exp.q_ref.q[n].y();
    }
    const double b1 = scn.rician.b1;
    const double b2 = scn.rician.b2;
    for (int n = 0; n < lay.n_count; ++n) {
        for (int k = 0; k < lay.k_count; ++k) {
            const double bound = b1 + b2 * exp.theta_lower_bound(k, n, exp.q_ref.q[n]);
            z[lay.theta_index(k, n)] = std::min(exp.theta_ref(k, n), bound) - kInteriorMargin;
        }
    }
    return z;
}

Trajectory unpack_trajectory(const Scenario& scn, const Layout& lay, const Eigen::VectorXd& z) {
    Trajectory traj;
    traj.q.resize(lay.n_count);
    for (int n = 0; n < lay.n_count; ++n) traj.q[n] = slot_position(lay, z, scn, n);
    return traj;
}

// True: every speed constraint is (numerically) saturated and the
// feasible set has no room to move; the step returns the iterate.
bool fully_constrained(const Scenario& scn, const Trajectory& q_ref) {
    const double step = scn.v_max * scn.slot_length();
    for (std::size_t n = 0; n + 1 < q_ref.q.size(); ++n) {
        if ((q_ref.q[n + 1] - q_ref.q[n]).squaredNorm() < step * step * (1.0 - 1e-9)) {
            return false;
        }
    }
    return true;
}

// Objective over the surrogate rates; combiner(alpha) is the weighted
// sum for finite alpha and the minimum for the max-min variant (the
// latter never calls this, it maximizes eta instead).
double weighted_surrogate_objective(const ScaExpansion& exp, const Scenario& scn,
                                    const Layout& lay, double alpha, const Eigen::VectorXd& z,
                                    Eigen::VectorXd* grad) {
    const int dim = static_cast<int>(z.size());
    if (grad) grad->setZero(dim);
    double total = 0.0;
    const double inv_n = 1.0 / lay.n_count;
    Eigen::VectorXd col(lay.k_count);
    for (int n = 0; n < lay.n_count; ++n) {
        const Eigen::Vector2d q = slot_position(lay, z, scn, n);
        for (int k = 0; k < lay.k_count; ++k) {
            col[k] = lower_bound_rate(exp, k, n, q, z[lay.theta_index(k, n)]);
        }
        total += inv_n * weighted_sum(col, alpha);
        if (grad) {
            const Eigen::VectorXd dh = inv_n * grad_weighted_sum(col, alpha);
            for (int k = 0; k < lay.k_count; ++k) {
                (*grad)[lay.theta_index(k, n)] +=
                    dh[k] * exp.psi(k, n) * std::exp(-z[lay.theta_index(k, n)]);
                if (lay.interior(n)) {
                    const Eigen::Vector2d dq =
                        -2.0 * dh[k] * exp.phi(k, n) * (q - scn.users[k]);
                    (*grad)[lay.q_index(n)] += dq.x();
                    (*grad)[lay.q_index(n) + 1] += dq.y();
                }
            }
        }
    }
    return total;
}

}  // namespace

double ScaExpansion::theta_lower_bound(int k, int n, const Eigen::Vector2d& q) const {
    const double y = y0(k, n);
    const double root = std::sqrt(y);
    return altitude / root -
           altitude / (2.0 * y * root) * ((q - users[k]).squaredNorm() - sq_dist_ref(k, n));
}

ScaExpansion build_expansion(const Scenario& scenario, const Allocation& allocation,
                             const Trajectory& q_ref, const Eigen::MatrixXd& theta_ref) {
    const int k_count = scenario.num_users();
    const int n_count = q_ref.num_slots();
    const double g0 = scenario.gamma0();
    const double c1 = scenario.rician.c1;
    const double c2 = scenario.rician.c2;
    const double h_sq = scenario.altitude * scenario.altitude;

    ScaExpansion exp;
    exp.users = scenario.users;
    exp.altitude = scenario.altitude;
    exp.q_ref = q_ref;
    exp.theta_ref = theta_ref;
    exp.base.setZero(k_count, n_count);
    exp.psi.setZero(k_count, n_count);
    exp.phi.setZero(k_count, n_count);
    exp.x0.resize(k_count, n_count);
    exp.y0.resize(k_count, n_count);
    exp.gamma_hat.setZero(k_count, n_count);
    exp.sq_dist_ref.resize(k_count, n_count);

    for (int n = 0; n < n_count; ++n) {
        for (int k = 0; k < k_count; ++k) {
            const double sq = (q_ref.q[n] - scenario.users[k]).squaredNorm();
            exp.sq_dist_ref(k, n) = sq;
            exp.x0(k, n) = 1.0 + std::exp(-theta_ref(k, n));
            exp.y0(k, n) = h_sq + sq;
            const double b = allocation.b(k, n);
            const double p = allocation.p(k, n);
            if (b < kBandwidthFloor) {
                if (p > 0.0) {
                    throw DegenerateAllocation("build_expansion: p > 0 with b ~ 0 at user " +
                                               std::to_string(k) + ", slot " +
                                               std::to_string(n));
                }
                continue;  // inactive user/slot: psi = phi = base = 0
            }
            const double gh = g0 * p / b;
            const double x0 = exp.x0(k, n);
            const double y0 = exp.y0(k, n);
            const double denom = x0 * y0 + (c1 * x0 + c2) * gh;
            exp.gamma_hat(k, n) = gh;
            exp.base(k, n) = b * std::log2(1.0 + (c1 + c2 / x0) * gh / y0);
            exp.psi(k, n) = b * c2 * gh * kLog2e / (x0 * denom);
            exp.phi(k, n) = b * (c1 * x0 + c2) * gh * kLog2e / (y0 * denom);
        }
    }
    return exp;
}

double lower_bound_rate(const ScaExpansion& expansion, int k, int n, const Eigen::Vector2d& q,
                        double theta_slack) {
    const double d_exp = std::exp(-theta_slack) - std::exp(-expansion.theta_ref(k, n));
    const double d_sq = (q - expansion.users[k]).squaredNorm() - expansion.sq_dist_ref(k, n);
    return expansion.base(k, n) - expansion.psi(k, n) * d_exp - expansion.phi(k, n) * d_sq;
}

Eigen::MatrixXd exact_slack(const Scenario& scenario, const Trajectory& trajectory) {
    const int k_count = scenario.num_users();
    const int n_count = trajectory.num_slots();
    Eigen::MatrixXd theta(k_count, n_count);
    for (int n = 0; n < n_count; ++n) {
        for (int k = 0; k < k_count; ++k) {
            theta(k, n) =
                scenario.rician.b1 +
                scenario.rician.b2 *
                    elevation_ratio(trajectory.q[n], scenario.users[k], scenario.altitude);
        }
    }
    return theta;
}

std::pair<Trajectory, Eigen::MatrixXd> initial_trajectory(const Scenario& scenario) {
    Trajectory traj;
    traj.q.resize(scenario.slots);
    for (int n = 0; n < scenario.slots; ++n) {
        const double t = static_cast<double>(n) / (scenario.slots - 1);
        traj.q[n] = (1.0 - t) * scenario.q_initial + t * scenario.q_final;
    }
    return {traj, exact_slack(scenario, traj)};
}

std::pair<Trajectory, Eigen::MatrixXd> solve_trajectory_step(
    const Scenario& scenario, const Allocation& allocation, const Trajectory& q_ref,
    const Eigen::MatrixXd& theta_ref, double alpha, double tol) {
    const Layout lay{scenario.num_users(), scenario.slots};
    const ScaExpansion exp = build_expansion(scenario, allocation, q_ref, theta_ref);
    if (exp.psi.maxCoeff() == 0.0 && exp.phi.maxCoeff() == 0.0) {
        return {q_ref, theta_ref};  // objective is constant in (q, Theta)
    }
    if (fully_constrained(scenario, q_ref)) return {q_ref, theta_ref};

    SmoothProgram prog;
    prog.dimension = lay.eta_offset();
    prog.objective = [&exp, &scenario, lay, alpha](const Eigen::VectorXd& z,
                                                   Eigen::VectorXd* grad) {
        return weighted_surrogate_objective(exp, scenario, lay, alpha, z, grad);
    };
    add_common_constraints(prog, exp, scenario, lay);
    prog.start = pack_start(exp, scenario, lay, 0);

    const SolverResult res = maximize(prog, tol, 400);
    if (res.status == SolveStatus::NumericalFailure) {
        throw SolverFailure("trajectory step solve failed");
    }

    Trajectory q_new = unpack_trajectory(scenario, lay, res.point);
    // Coordinatewise-optimal slack for the accepted positions: the
    // surrogate is increasing in Theta, so push it to its bound.
    Eigen::VectorXd z_proj = res.point;
    for (int n = 0; n < lay.n_count; ++n) {
        for (int k = 0; k < lay.k_count; ++k) {
            z_proj[lay.theta_index(k, n)] =
                scenario.rician.b1 +
                scenario.rician.b2 * exp.theta_lower_bound(k, n, q_new.q[n]);
        }
    }
    const double surrogate_new =
        objective_from_rates(surrogate_rates(exp, scenario, lay, z_proj), alpha);
    const double surrogate_old = objective_from_rates(exp.base, alpha);
    const double true_new = allocation_objective(scenario, q_new, allocation, alpha);
    const double true_old = allocation_objective(scenario, q_ref, allocation, alpha);
    if (surrogate_new < surrogate_old - kAscentSlack || true_new < true_old - kAscentSlack) {
        return {q_ref, theta_ref};
    }
    return {q_new, exact_slack(scenario, q_new)};
}

std::tuple<Trajectory, Eigen::MatrixXd, Eigen::VectorXd> solve_maxmin_trajectory_step(
    const Scenario& scenario, const Allocation& allocation, const Trajectory& q_ref,
    const Eigen::MatrixXd& theta_ref, double tol) {
    const Layout lay{scenario.num_users(), scenario.slots};
    const ScaExpansion exp = build_expansion(scenario, allocation, q_ref, theta_ref);
    auto eta_of = [&](const Eigen::MatrixXd& rates) {
        Eigen::VectorXd eta(lay.n_count);
        for (int n = 0; n < lay.n_count; ++n) eta[n] = rates.col(n).minCoeff();
        return eta;
    };
    if ((exp.psi.maxCoeff() == 0.0 && exp.phi.maxCoeff() == 0.0) ||
        fully_constrained(scenario, q_ref)) {
        return {q_ref, theta_ref, eta_of(exp.base)};
    }

    SmoothProgram prog;
    prog.dimension = lay.eta_offset() + lay.n_count;
    const int dim = prog.dimension;
    const int eta0 = lay.eta_offset();
    const double inv_n = 1.0 / lay.n_count;
    prog.objective = [eta0, dim, inv_n, lay](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
        if (grad) {
            grad->setZero(dim);
            grad->segment(eta0, lay.n_count).setConstant(inv_n);
        }
        return inv_n * z.segment(eta0, lay.n_count).sum();
    };
    add_common_constraints(prog, exp, scenario, lay);
    // eta_n <= every surrogate rate in slot n.
    for (int n = 0; n < lay.n_count; ++n) {
        for (int k = 0; k < lay.k_count; ++k) {
            prog.inequalities.push_back([k, n, eta0, dim, lay, &exp, &scenario](
                                            const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
                const Eigen::Vector2d q = slot_position(lay, z, scenario, n);
                const double rate = lower_bound_rate(exp, k, n, q, z[lay.theta_index(k, n)]);
                if (grad) {
                    grad->setZero(dim);
                    (*grad)[eta0 + n] = 1.0;
                    (*grad)[lay.theta_index(k, n)] =
                        -exp.psi(k, n) * std::exp(-z[lay.theta_index(k, n)]);
                    if (lay.interior(n)) {
                        const Eigen::Vector2d dq =
                            2.0 * exp.phi(k, n) * (q - scenario.users[k]);
                        (*grad)[lay.q_index(n)] = dq.x();
                        (*grad)[lay.q_index(n) + 1] = dq.y();
                    }
                }
                return z[eta0 + n] - rate;
            });
        }
    }
    Eigen::VectorXd start = pack_start(exp, scenario, lay, lay.n_count);
    {
        const Eigen::MatrixXd start_rates =
            surrogate_rates(exp, scenario, lay, start);
        for (int n = 0; n < lay.n_count; ++n) {
            const double m = start_rates.col(n).minCoeff();
            start[eta0 + n] = m - kInteriorMargin * (1.0 + std::abs(m));
        }
    }
    prog.start = start;

    const SolverResult res = maximize(prog, tol, 400);
    if (res.status == SolveStatus::NumericalFailure) {
        throw SolverFailure("max-min trajectory step solve failed");
    }

    Trajectory q_new = unpack_trajectory(scenario, lay, res.point);
    Eigen::VectorXd z_proj = res.point;
    for (int n = 0; n < lay.n_count; ++n) {
        for (int k = 0; k < lay.k_count; ++k) {
            z_proj[lay.theta_index(k, n)] =
                scenario.rician.b1 +
                scenario.rician.b2 * exp.theta_lower_bound(k, n, q_new.q[n]);
        }
    }
    const Eigen::MatrixXd rates_new = surrogate_rates(exp, scenario, lay, z_proj);
    const double surrogate_new = objective_from_rates(rates_new, kAlphaMaxMin);
    const double surrogate_old = objective_from_rates(exp.base, kAlphaMaxMin);
    const double true_new = allocation_objective(scenario, q_new, allocation, kAlphaMaxMin);
    const double true_old = allocation_objective(scenario, q_ref, allocation, kAlphaMaxMin);
    if (surrogate_new < surrogate_old - kAscentSlack || true_new < true_old - kAscentSlack) {
        return {q_ref, theta_ref, eta_of(exp.base)};
    }
    return {q_new, exact_slack(scenario, q_new), eta_of(rates_new)};
}

}  // namespace fairtraj
