#include "fairtraj/convex_core.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <limits>

namespace fairtraj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BoxBound {
    int index;
    double bound;
    bool is_upper;
};

// Barrier-augmented objective, minimized as its negative:
//   F(z) = -f(z) - mu * sum_i log(-g_i(z)) - mu * sum(box logs)
// Returns +inf outside the strictly feasible region.
struct BarrierProblem {
    const SmoothProgram& prog;
    const std::vector<BoxBound>& boxes;
    double mu = 1.0;

    double eval(const Eigen::VectorXd& z, Eigen::VectorXd* grad,
                Eigen::VectorXd& scratch) const {
        double value = -prog.objective(z, grad);
        if (!std::isfinite(value)) return kInf;
        if (grad) *grad = -*grad;
        for (const auto& g : prog.inequalities) {
            const double gi = g(z, grad ? &scratch : nullptr);
            if (!(gi < 0.0) || !std::isfinite(gi)) return kInf;
            value -= mu * std::log(-gi);
            if (grad) grad->noalias() += (-mu / gi) * scratch;
        }
        for (const auto& b : boxes) {
            const double slack = b.is_upper ? b.bound - z[b.index] : z[b.index] - b.bound;
            if (!(slack > 0.0)) return kInf;
            value -= mu * std::log(slack);
            if (grad) (*grad)[b.index] += b.is_upper ? mu / slack : -mu / slack;
        }
        return value;
    }
};

// Limited-memory BFGS direction from the standard two-loop recursion.
class LbfgsMemory {
  public:
    explicit LbfgsMemory(int capacity) : capacity_(capacity) {}

    void clear() { pairs_.clear(); }

    void push(const Eigen::VectorXd& s, const Eigen::VectorXd& y) {
        const double sy = s.dot(y);
        if (sy <= 1e-12 * s.norm() * y.norm()) return;  // curvature too weak
        if (static_cast<int>(pairs_.size()) == capacity_) pairs_.pop_front();
        pairs_.push_back({s, y, sy});
    }

    // Descent direction for gradient g (of the minimized function).
    Eigen::VectorXd direction(const Eigen::VectorXd& g) const {
        Eigen::VectorXd q = g;
        std::vector<double> alpha(pairs_.size());
        for (int i = static_cast<int>(pairs_.size()) - 1; i >= 0; --i) {
            alpha[i] = pairs_[i].s.dot(q) / pairs_[i].sy;
            q.noalias() -= alpha[i] * pairs_[i].y;
        }
        if (!pairs_.empty()) {
            const auto& last = pairs_.back();
            q *= last.sy / last.y.squaredNorm();
        }
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            const double beta = pairs_[i].y.dot(q) / pairs_[i].sy;
            q.noalias() += (alpha[i] - beta) * pairs_[i].s;
        }
        return -q;
    }

    bool empty() const { return pairs_.empty(); }

  private:
    struct Pair {
        Eigen::VectorXd s, y;
        double sy;
    };
    int capacity_;
    std::deque<Pair> pairs_;
};

}  // namespace

SolverResult maximize(const SmoothProgram& program, double tol, int max_iter) {
    const int dim = program.dimension;
    SolverResult result;

    std::vector<BoxBound> boxes;
    if (program.lower.size() == dim) {
        for (int i = 0; i < dim; ++i) {
            if (std::isfinite(program.lower[i])) boxes.push_back({i, program.lower[i], false});
        }
    }
    if (program.upper.size() == dim) {
        for (int i = 0; i < dim; ++i) {
            if (std::isfinite(program.upper[i])) boxes.push_back({i, program.upper[i], true});
        }
    }
    const int num_ineq = static_cast<int>(program.inequalities.size() + boxes.size());

    // Equality constraints A z = c are eliminated through an orthonormal
    // nullspace basis: z = z_start + basis * y.
    const bool has_eq = program.eq_matrix.rows() > 0;
    Eigen::MatrixXd basis;
    if (has_eq) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(program.eq_matrix);
        Eigen::MatrixXd kernel = lu.kernel();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
        basis = qr.householderQ() * Eigen::MatrixXd::Identity(dim, kernel.cols());
    }

    Eigen::VectorXd z = program.start;
    Eigen::VectorXd scratch(dim);
    Eigen::VectorXd grad_full(dim);

    const double start_value = program.objective(program.start, nullptr);

    auto reduce = [&](const Eigen::VectorXd& g) -> Eigen::VectorXd {
        return has_eq ? Eigen::VectorXd(basis.transpose() * g) : g;
    };
    auto expand_step = [&](const Eigen::VectorXd& d) -> Eigen::VectorXd {
        return has_eq ? Eigen::VectorXd(basis * d) : d;
    };

    BarrierProblem barrier{program, boxes, 1.0};
    int total_iters = 0;
    double stationarity = kInf;
    bool numerical_failure = false;

    // Strict-feasibility check of the start point.
    {
        const double f0 = barrier.eval(z, nullptr, scratch);
        if (!std::isfinite(f0)) {
            result.point = program.start;
            result.value = start_value;
            result.status = SolveStatus::NumericalFailure;
            return result;
        }
    }

    while (true) {
        const bool final_stage = num_ineq == 0 || num_ineq * barrier.mu <= tol;
        const double gtol = final_stage ? tol : std::max(tol, 1e-2 * barrier.mu);

        LbfgsMemory memory(10);
        Eigen::VectorXd grad_red;
        double value = barrier.eval(z, &grad_full, scratch);
        grad_red = reduce(grad_full);
        bool restarted = false;

        int iter = 0;
        for (; iter < max_iter; ++iter, ++total_iters) {
            const double gnorm = grad_red.norm();
            if (gnorm <= gtol) break;
            Eigen::VectorXd dir = memory.direction(grad_red);
            double t = memory.empty() ? 1.0 / std::max(1.0, gnorm) : 1.0;
            const double slope = grad_red.dot(dir);
            if (!(slope < 0.0)) {  // not a descent direction, fall back
                memory.clear();
                dir = -grad_red;
                t = 1.0 / std::max(1.0, gnorm);
            }
            const double dslope = grad_red.dot(dir);

            Eigen::VectorXd z_new;
            double value_new = kInf;
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls) {
                z_new = z + expand_step(t * dir);
                value_new = barrier.eval(z_new, nullptr, scratch);
                if (value_new <= value + 1e-4 * t * dslope) {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) {
                if (!restarted && !memory.empty()) {
                    memory.clear();
                    restarted = true;
                    continue;
                }
                break;  // line search exhausted; stage ends here
            }

            Eigen::VectorXd grad_new(dim);
            const double check = barrier.eval(z_new, &grad_new, scratch);
            if (!std::isfinite(check)) {
                numerical_failure = true;
                break;
            }
            Eigen::VectorXd grad_red_new = reduce(grad_new);
            memory.push(t * dir, grad_red_new - grad_red);
            z = z_new;
            value = value_new;
            grad_red = grad_red_new;
            restarted = false;
        }

        if (final_stage) {
            stationarity = grad_red.norm();
            break;
        }
        if (numerical_failure) break;
        barrier.mu *= 0.1;
    }

    result.point = z;
    result.value = program.objective(z, nullptr);
    result.stationarity = stationarity;
    result.iterations = total_iters;
    if (numerical_failure || !std::isfinite(result.value)) {
        result.status = SolveStatus::NumericalFailure;
    } else if (stationarity <= tol) {
        result.status = SolveStatus::Converged;
    } else {
        result.status = SolveStatus::IterLimit;
    }
    // Never return a point worse than the start.
    if (std::isfinite(start_value) && result.value < start_value) {
        result.point = program.start;
        result.value = start_value;
    }
    return result;
}

}  // namespace fairtraj
