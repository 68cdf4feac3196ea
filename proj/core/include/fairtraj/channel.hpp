#pragma once

#include <Eigen/Core>
#include <vector>

#include "fairtraj/scenario.hpp"

namespace fairtraj {

/// UAV horizontal positions per slot, at the scenario's fixed altitude.
struct Trajectory {
    std::vector<Eigen::Vector2d> q;

    int num_slots() const { return static_cast<int>(q.size()); }
};

/// Per (user, slot) channel quantities for a fixed trajectory.
/// gain(k,n) = f(k,n) * gamma0 / d(k,n)^2 is the normalized SNR slope
/// that enters the rate as b*log2(1 + gain*p/b).
struct RateContext {
    Eigen::MatrixXd dist;    // d_k[n] [m]
    Eigen::MatrixXd theta;   // H/d_k[n], in (0,1]
    Eigen::MatrixXd fading;  // effective fading power f_k[n]
    Eigen::MatrixXd gain;    // gamma_k[n], dimensionless

    static RateContext build(const Scenario& scenario, const Trajectory& trajectory);
};

struct Allocation;  // allocation.hpp

double distance(const Eigen::Vector2d& q, const Eigen::Vector2d& w, double altitude);
double elevation_ratio(const Eigen::Vector2d& q, const Eigen::Vector2d& w, double altitude);
double effective_fading(double theta, const RicianParams& rician);

/// b*log2(1 + gain*p/b), extended by continuity to 0 at b = 0.
double rate(double b, double p, double gain);

Eigen::MatrixXd rate_matrix(const Scenario& scenario, const Trajectory& trajectory,
                            const Allocation& allocation);

}  // namespace fairtraj
