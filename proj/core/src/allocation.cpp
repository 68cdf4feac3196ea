#include "fairtraj/allocation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fairtraj/convex_core.hpp"
#include "fairtraj/errors.hpp"
#include "fairtraj/fairness.hpp"

namespace fairtraj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2e = 1.0 / std::log(2.0);

// R = b*log2(1 + gain*p/b) and its partials; requires b > 0.
struct RateEval {
    double value, db, dp;
};

RateEval eval_rate(double b, double p, double gain) {
    const double s = gain * p / b;
    const double log_term = std::log2(1.0 + s);
    return {b * log_term, log_term - kLog2e * s / (1.0 + s), kLog2e * gain / (1.0 + s)};
}

// Per-slot weighted program over z = [b_1..b_K, p_1..p_K].
SolverResult solve_weighted_slot(const Eigen::VectorXd& gains, double alpha, double tol) {
    const int k_count = static_cast<int>(gains.size());
    SmoothProgram prog;
    prog.dimension = 2 * k_count;
    prog.objective = [&gains, alpha, k_count](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
        Eigen::VectorXd rates(k_count), db(k_count), dp(k_count);
        for (int k = 0; k < k_count; ++k) {
            const RateEval r = eval_rate(z[k], z[k_count + k], gains[k]);
            rates[k] = r.value;
            db[k] = r.db;
            dp[k] = r.dp;
        }
        const double h = weighted_sum(rates, alpha);
        if (grad) {
            const Eigen::VectorXd dh = grad_weighted_sum(rates, alpha);
            grad->resize(2 * k_count);
            for (int k = 0; k < k_count; ++k) {
                (*grad)[k] = dh[k] * db[k];
                (*grad)[k_count + k] = dh[k] * dp[k];
            }
        }
        return h;
    };
    for (int half = 0; half < 2; ++half) {
        prog.inequalities.push_back(
            [half, k_count](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
                if (grad) {
                    grad->setZero(2 * k_count);
                    grad->segment(half * k_count, k_count).setOnes();
                }
                return z.segment(half * k_count, k_count).sum() - 1.0;
            });
    }
    prog.lower.setConstant(2 * k_count, 0.0);
    prog.lower.head(k_count).setConstant(kBandwidthFloor);
    prog.upper.setConstant(2 * k_count, 1.0);
    prog.start.setConstant(2 * k_count, 1.0 / (k_count + 1));
    return maximize(prog, tol, 400);
}

// Per-slot epigraph program over z = [b, p, eta].
SolverResult solve_maxmin_slot(const Eigen::VectorXd& gains, double tol) {
    const int k_count = static_cast<int>(gains.size());
    const int dim = 2 * k_count + 1;
    SmoothProgram prog;
    prog.dimension = dim;
    prog.objective = [dim](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
        if (grad) {
            grad->setZero(dim);
            (*grad)[dim - 1] = 1.0;
        }
        return z[dim - 1];
    };
    for (int half = 0; half < 2; ++half) {
        prog.inequalities.push_back([half, k_count, dim](const Eigen::VectorXd& z,
                                                        Eigen::VectorXd* grad) {
            if (grad) {
                grad->setZero(dim);
                grad->segment(half * k_count, k_count).setOnes();
            }
            return z.segment(half * k_count, k_count).sum() - 1.0;
        });
    }
    for (int k = 0; k < k_count; ++k) {
        prog.inequalities.push_back(
            [k, k_count, dim, &gains](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
                const RateEval r = eval_rate(z[k], z[k_count + k], gains[k]);
                if (grad) {
                    grad->setZero(dim);
                    (*grad)[k] = -r.db;
                    (*grad)[k_count + k] = -r.dp;
                    (*grad)[dim - 1] = 1.0;
                }
                return z[dim - 1] - r.value;
            });
    }
    prog.lower.setConstant(dim, 0.0);
    prog.lower.head(k_count).setConstant(kBandwidthFloor);
    prog.lower[dim - 1] = -kInf;
    prog.upper.setConstant(dim, 1.0);
    prog.upper[dim - 1] = kInf;
    prog.start.setConstant(dim, 1.0 / (k_count + 1));
    double min_rate = kInf;
    for (int k = 0; k < k_count; ++k) {
        min_rate = std::min(min_rate, eval_rate(prog.start[k], prog.start[k_count + k],
                                                gains[k]).value);
    }
    prog.start[dim - 1] = 0.5 * min_rate;
    return maximize(prog, tol, 400);
}

// For fixed b, the max-min optimum in p equalizes all rates: find the
// common rate eta with sum_k p_k(eta) = 1, p_k = b_k*(2^(eta/b_k)-1)/gain_k.
void equalize_power(const Eigen::VectorXd& gains, const Eigen::VectorXd& b,
                    Eigen::VectorXd* p_out) {
    const int k_count = static_cast<int>(gains.size());
    auto power_sum = [&](double eta) {
        double total = 0.0;
        for (int k = 0; k < k_count; ++k) {
            total += b[k] * std::expm1(std::log(2.0) * eta / b[k]) / gains[k];
        }
        return total;
    };
    double lo = 0.0, hi = 1e-3;
    while (power_sum(hi) < 1.0 && hi < 1e9) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (power_sum(mid) < 1.0 ? lo : hi) = mid;
    }
    const double eta = 0.5 * (lo + hi);
    p_out->resize(k_count);
    for (int k = 0; k < k_count; ++k) {
        (*p_out)[k] = std::min(1.0, b[k] * std::expm1(std::log(2.0) * eta / b[k]) / gains[k]);
    }
}

}  // namespace

Allocation Allocation::uniform(int num_users, int num_slots) {
    Allocation a;
    a.b.setConstant(num_users, num_slots, 1.0 / (num_users + 1));
    a.p.setConstant(num_users, num_slots, 1.0 / (num_users + 1));
    return a;
}

bool Allocation::feasible(double tol) const {
    if (b.minCoeff() < -tol || b.maxCoeff() > 1.0 + tol) return false;
    if (p.minCoeff() < -tol || p.maxCoeff() > 1.0 + tol) return false;
    for (int n = 0; n < b.cols(); ++n) {
        if (b.col(n).sum() > 1.0 + tol || p.col(n).sum() > 1.0 + tol) return false;
    }
    return true;
}

Allocation solve_weighted_allocation(const Scenario& scenario, const Trajectory& trajectory,
                                     double alpha, double tol) {
    const RateContext ctx = RateContext::build(scenario, trajectory);
    const int k_count = scenario.num_users();
    const int n_count = trajectory.num_slots();
    Allocation alloc;
    alloc.b.resize(k_count, n_count);
    alloc.p.resize(k_count, n_count);
    for (int n = 0; n < n_count; ++n) {
        const SolverResult res = solve_weighted_slot(ctx.gain.col(n), alpha, tol);
        if (res.status == SolveStatus::NumericalFailure) {
            throw SolverFailure("weighted allocation solve failed in slot " + std::to_string(n),
                                n);
        }
        alloc.b.col(n) = res.point.head(k_count);
        alloc.p.col(n) = res.point.tail(k_count);
    }
    return alloc;
}

Allocation solve_maxmin_allocation(const Scenario& scenario, const Trajectory& trajectory,
                                   double tol) {
    const RateContext ctx = RateContext::build(scenario, trajectory);
    const int k_count = scenario.num_users();
    const int n_count = trajectory.num_slots();
    Allocation alloc;
    alloc.b.resize(k_count, n_count);
    alloc.p.resize(k_count, n_count);
    for (int n = 0; n < n_count; ++n) {
        const SolverResult res = solve_maxmin_slot(ctx.gain.col(n), tol);
        if (res.status == SolveStatus::NumericalFailure) {
            throw SolverFailure("max-min allocation solve failed in slot " + std::to_string(n),
                                n);
        }
        const Eigen::VectorXd b = res.point.head(k_count);
        Eigen::VectorXd p;
        equalize_power(ctx.gain.col(n), b, &p);
        alloc.b.col(n) = b;
        alloc.p.col(n) = p;
    }
    return alloc;
}

double objective_from_rates(const Eigen::MatrixXd& rates, double alpha) {
    double total = 0.0;
    for (int n = 0; n < rates.cols(); ++n) {
        total += is_maxmin(alpha) ? min_component(rates.col(n))
                                  : weighted_sum(rates.col(n), alpha);
    }
    return total / rates.cols();
}

double allocation_objective(const Scenario& scenario, const Trajectory& trajectory,
                            const Allocation& allocation, double alpha) {
    return objective_from_rates(rate_matrix(scenario, trajectory, allocation), alpha);
}

}  // namespace fairtraj
