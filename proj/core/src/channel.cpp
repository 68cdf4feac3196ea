#include "fairtraj/channel.hpp"

#include <cmath>

#include "fairtraj/allocation.hpp"

namespace fairtraj {

double distance(const Eigen::Vector2d& q, const Eigen::Vector2d& w, double altitude) {
    return std::sqrt(altitude * altitude + (q - w).squaredNorm());
}

double elevation_ratio(const Eigen::Vector2d& q, const Eigen::Vector2d& w, double altitude) {
    return altitude / distance(q, w, altitude);
}

double effective_fading(double theta, const RicianParams& rician) {
    return rician.c1 + rician.c2 / (1.0 + std::exp(-(rician.b1 + rician.b2 * theta)));
}

double rate(double b, double p, double gain) {
    if (b <= 0.0) return 0.0;
    return b * std::log2(1.0 + gain * p / b);
}

RateContext RateContext::build(const Scenario& scenario, const Trajectory& trajectory) {
    const int k_count = scenario.num_users();
    const int n_count = trajectory.num_slots();
    const double g0 = scenario.gamma0();
    RateContext ctx;
    ctx.dist.resize(k_count, n_count);
    ctx.theta.resize(k_count, n_count);
    ctx.fading.resize(k_count, n_count);
    ctx.gain.resize(k_count, n_count);
    for (int n = 0; n < n_count; ++n) {
        for (int k = 0; k < k_count; ++k) {
            const double d = distance(trajectory.q[n], scenario.users[k], scenario.altitude);
            const double th = scenario.altitude / d;
            const double f = effective_fading(th, scenario.rician);
            ctx.dist(k, n) = d;
            ctx.theta(k, n) = th;
            ctx.fading(k, n) = f;
            ctx.gain(k, n) = f * g0 / (d * d);
        }
    }
    return ctx;
}

Eigen::MatrixXd rate_matrix(const Scenario& scenario, const Trajectory& trajectory,
                            const Allocation& allocation) {
    const RateContext ctx = RateContext::build(scenario, trajectory);
    Eigen::MatrixXd rates(ctx.gain.rows(), ctx.gain.cols());
    for (int n = 0; n < rates.cols(); ++n) {
        for (int k = 0; k < rates.rows(); ++k) {
            rates(k, n) = rate(allocation.b(k, n), allocation.p(k, n), ctx.gain(k, n));
        }
    }
    return rates;
}

}  // namespace fairtraj
