#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>

namespace fairtraj {

/// Fairness factor. Finite alpha selects the softmax-weighted sum; the
/// infinite value routes callers to the max-min code path and is never
/// used in weighted-sum arithmetic.
constexpr double kAlphaMaxMin = std::numeric_limits<double>::infinity();

inline bool is_maxmin(double alpha) { return std::isinf(alpha); }

/// Softmax weights of -alpha*x, computed in min-shifted form so that
/// large alpha does not underflow. Sums to 1, each component in (0,1].
Eigen::VectorXd fairness_weights(const Eigen::VectorXd& x, double alpha);

/// sum_j w_j(x) * x_j; lies in [min x, max x].
double weighted_sum(const Eigen::VectorXd& x, double alpha);

/// Analytic gradient of weighted_sum; componentwise nonnegative whenever
/// alpha*x_i <= 1 for all i.
Eigen::VectorXd grad_weighted_sum(const Eigen::VectorXd& x, double alpha);

/// The alpha -> infinity limit of weighted_sum.
double min_component(const Eigen::VectorXd& x);

struct FairnessMetrics {
    double variance = 0.0;  // population variance
    double jain_index = 1.0;
    double min = 0.0;
    double mean = 0.0;
};

/// Jain index of the all-zero vector is defined as 1.
FairnessMetrics fairness_metrics(const Eigen::VectorXd& per_user_throughput);

struct Condition1Check {
    bool holds = true;
    double max_product = 0.0;  // max over entries of alpha * R
};

/// Regime check alpha*R_k[n] <= 1 under which the weighted sum is
/// concave and nondecreasing. Reporting only; never a hard constraint.
Condition1Check check_condition1(const Eigen::MatrixXd& rates, double alpha);

}  // namespace fairtraj
