#include "fairtraj/fairness.hpp"

#include <cmath>

namespace fairtraj {

Eigen::VectorXd fairness_weights(const Eigen::VectorXd& x, double alpha) {
    const double shift = x.minCoeff();
    Eigen::VectorXd w = (-alpha * (x.array() - shift)).exp();
    return w / w.sum();
}

double weighted_sum(const Eigen::VectorXd& x, double alpha) {
    return fairness_weights(x, alpha).dot(x);
}

Eigen::VectorXd grad_weighted_sum(const Eigen::VectorXd& x, double alpha) {
    // dH/dx_j = w_j * (1 - alpha*x_j + alpha*H), with H the weighted sum.
    const Eigen::VectorXd w = fairness_weights(x, alpha);
    const double h = w.dot(x);
    return w.array() * (1.0 - alpha * x.array() + alpha * h);
}

double min_component(const Eigen::VectorXd& x) { return x.minCoeff(); }

FairnessMetrics fairness_metrics(const Eigen::VectorXd& per_user_throughput) {
    FairnessMetrics m;
    const auto& x = per_user_throughput;
    const double k = static_cast<double>(x.size());
    m.mean = x.mean();
    m.min = x.minCoeff();
    m.variance = (x.array() - m.mean).square().sum() / k;
    const double sum = x.sum();
    const double sum_sq = x.array().square().sum();
    m.jain_index = sum_sq > 0.0 ? sum * sum / (k * sum_sq) : 1.0;
    return m;
}

Condition1Check check_condition1(const Eigen::MatrixXd& rates, double alpha) {
    Condition1Check c;
    c.max_product = alpha * rates.maxCoeff();
    c.holds = c.max_product <= 1.0;
    return c;
}

}  // namespace fairtraj
