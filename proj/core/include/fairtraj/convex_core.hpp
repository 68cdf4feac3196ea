#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace fairtraj {

/// Value-and-gradient callback: returns f(z); if grad is non-null it is
/// resized to z.size() and filled with the gradient.
using ValueGrad = std::function<double(const Eigen::VectorXd& z, Eigen::VectorXd* grad)>;

/// Smooth concave maximization over a convex set:
///   maximize f(z)  s.t.  g_i(z) <= 0,  A z = c,  lower <= z <= upper.
/// The start point must satisfy every inequality strictly and the
/// equalities to 1e-9. Box bounds may be +-infinity entrywise; an empty
/// lower/upper vector means unbounded.
struct SmoothProgram {
    int dimension = 0;
    ValueGrad objective;
    std::vector<ValueGrad> inequalities;
    Eigen::MatrixXd eq_matrix;  // 0 rows when there are no equalities
    Eigen::VectorXd eq_rhs;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    Eigen::VectorXd start;
};

enum class SolveStatus { Converged, IterLimit, NumericalFailure };

struct SolverResult {
    Eigen::VectorXd point;
    double value = 0.0;
    double stationarity = 0.0;  // projected-gradient norm at the final barrier stage
    int iterations = 0;
    SolveStatus status = SolveStatus::NumericalFailure;
};

/// Log-barrier interior-point maximization. Barrier parameter starts at
/// mu = 1 and shrinks by 10x per stage until m*mu <= tol (m inequality
/// count); each stage is maximized by an L-BFGS ascent with Armijo
/// backtracking, equalities eliminated through a nullspace basis.
/// Deterministic: identical inputs give bit-identical results.
SolverResult maximize(const SmoothProgram& program, double tol, int max_iter);

}  // namespace fairtraj
