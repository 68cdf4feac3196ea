#include <doctest.h>

#include <cmath>
#include <random>

#include "fairtraj/allocation.hpp"
#include "fairtraj/fairness.hpp"
#include "test_scenarios.hpp"

using namespace fairtraj;
using fairtraj::testing::base_scenario;

namespace {

// Two-user scenario whose per-slot gains are controlled through user
// offsets from the hover point.
Scenario two_user_scenario(double offset1, double offset2, int slots = 2) {
    Scenario s = base_scenario();
    s.slots = slots;
    s.horizon = slots;
    s.users = {{offset1, 0.0}, {offset2, 0.0}};
    s.validate();
    return s;
}

Trajectory hover(int slots) {
    Trajectory t;
    t.q.assign(slots, {0.0, 0.0});
    return t;
}

// Exhaustive grid oracle for K=2, N=1: b2 = 1-b1, p2 = 1-p1.
double grid_oracle_weighted(double gain1, double gain2, double alpha, int grid = 200) {
    double best = -1.0;
    for (int i = 0; i <= grid; ++i) {
        const double b1 = static_cast<double>(i) / grid;
        for (int j = 0; j <= grid; ++j) {
            const double p1 = static_cast<double>(j) / grid;
            Eigen::Vector2d rates(rate(b1, p1, gain1), rate(1.0 - b1, 1.0 - p1, gain2));
            best = std::max(best, weighted_sum(rates, alpha));
        }
    }
    return best;
}

// Max-min oracle for K=2, N=1: sweep b1, equalize rates by bisection on
// the common rate eta with p1(eta) + p2(eta) = 1.
double bisection_oracle_maxmin(double gain1, double gain2, int grid = 400) {
    auto eta_for_bandwidth = [&](double b1) {
        const double b2 = 1.0 - b1;
        auto power_needed = [&](double eta) {
            return b1 * std::expm1(std::log(2.0) * eta / b1) / gain1 +
                   b2 * std::expm1(std::log(2.0) * eta / b2) / gain2;
        };
        double lo = 0.0, hi = 1.0;
        while (power_needed(hi) < 1.0) hi *= 2.0;
        for (int i = 0; i < 100; ++i) {
            const double mid = 0.5 * (lo + hi);
            (power_needed(mid) < 1.0 ? lo : hi) = mid;
        }
        return lo;
    };
    double best = 0.0;
    for (int i = 1; i < grid; ++i) {
        best = std::max(best, eta_for_bandwidth(static_cast<double>(i) / grid));
    }
    return best;
}

Eigen::VectorXd slot_gains(const Scenario& s, const Trajectory& t, int n) {
    return RateContext::build(s, t).gain.col(n);
}

}  // namespace

TEST_CASE("single user takes the full budget") {
    const Scenario s = fairtraj::testing::single_user_scenario(3);
    const Trajectory t = hover(3);
    for (double alpha : {0.0, 0.1}) {
        const Allocation a = solve_weighted_allocation(s, t, alpha, 1e-8);
        for (int n = 0; n < 3; ++n) {
            CHECK(a.b(0, n) == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(a.p(0, n) == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("weighted solve matches the grid oracle") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> offset(0.0, 1500.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Scenario s = two_user_scenario(offset(rng), offset(rng));
        const Trajectory t = hover(2);
        const Eigen::VectorXd gains = slot_gains(s, t, 0);
        for (double alpha : {0.0, 0.05, 0.1}) {
            const Allocation a = solve_weighted_allocation(s, t, alpha, 1e-8);
            const double solver_value =
                weighted_sum(rate_matrix(s, t, a).col(0), alpha);
            const double oracle = grid_oracle_weighted(gains[0], gains[1], alpha);
            CHECK(solver_value >= oracle - 1e-3);
            CHECK(solver_value <= oracle + 1e-2);  // grid resolution slack
        }
    }
}

TEST_CASE("equal gains at alpha=0: value is half the single-user rate") {
    const Scenario s = two_user_scenario(300.0, -300.0);
    const Trajectory t = hover(2);
    const Eigen::VectorXd gains = slot_gains(s, t, 0);
    REQUIRE(gains[0] == doctest::Approx(gains[1]));
    const Allocation a = solve_weighted_allocation(s, t, 0.0, 1e-8);
    const double value = weighted_sum(rate_matrix(s, t, a).col(0), 0.0);
    // optimizer is non-unique here; only the value is pinned
    CHECK(value == doctest::Approx(0.5 * std::log2(1.0 + gains[0])).epsilon(1e-5));
}

TEST_CASE("strongly asymmetric gains at alpha=0 concentrate the budget") {
    // gain ratio ~100x via distance: d^2 ratio 10^2 and fading drop
    const Scenario s = two_user_scenario(0.0, 5600.0);
    const Trajectory t = hover(2);
    const Eigen::VectorXd gains = slot_gains(s, t, 0);
    REQUIRE(gains[0] / gains[1] > 100.0);
    const Allocation a = solve_weighted_allocation(s, t, 0.0, 1e-8);
    CHECK(a.b(0, 0) >= 0.99);
    CHECK(a.p(0, 0) >= 0.99);
}

TEST_CASE("max-min equalizes rates and matches the bisection oracle") {
    std::mt19937 rng(33);
    std::uniform_real_distribution<double> offset(0.0, 2000.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Scenario s = two_user_scenario(offset(rng), offset(rng));
        const Trajectory t = hover(2);
        const Eigen::VectorXd gains = slot_gains(s, t, 0);
        const Allocation a = solve_maxmin_allocation(s, t, 1e-8);
        const Eigen::MatrixXd rates = rate_matrix(s, t, a);
        for (int n = 0; n < 2; ++n) {
            const double spread = rates.col(n).maxCoeff() - rates.col(n).minCoeff();
            CHECK(spread <= 1e-6 * rates.col(n).maxCoeff());
        }
        const double oracle = bisection_oracle_maxmin(gains[0], gains[1]);
        CHECK(rates.col(0).minCoeff() == doctest::Approx(oracle).epsilon(1e-3));
    }
}

TEST_CASE("max-min with equal gains splits evenly") {
    const Scenario s = two_user_scenario(400.0, -400.0);
    const Trajectory t = hover(2);
    const Allocation a = solve_maxmin_allocation(s, t, 1e-8);
    CHECK(a.b(0, 0) == doctest::Approx(a.b(1, 0)).epsilon(1e-4));
    const Eigen::MatrixXd rates = rate_matrix(s, t, a);
    CHECK(rates(0, 0) == doctest::Approx(rates(1, 0)).epsilon(1e-9));
}

TEST_CASE("max-min floor dominates the alpha=0 floor") {
    const Scenario s = two_user_scenario(100.0, 1800.0);
    const Trajectory t = hover(2);
    const Eigen::MatrixXd maxmin_rates = rate_matrix(s, t, solve_maxmin_allocation(s, t, 1e-8));
    const Eigen::MatrixXd sumrate_rates =
        rate_matrix(s, t, solve_weighted_allocation(s, t, 0.0, 1e-8));
    for (int n = 0; n < 2; ++n) {
        CHECK(maxmin_rates.col(n).minCoeff() >= sumrate_rates.col(n).minCoeff() - 1e-9);
    }
}

TEST_CASE("allocation feasibility after solves") {
    const Scenario s = two_user_scenario(350.0, 900.0);
    const Trajectory t = hover(2);
    CHECK(solve_weighted_allocation(s, t, 0.1, 1e-8).feasible());
    CHECK(solve_maxmin_allocation(s, t, 1e-8).feasible());
    // budget constraints are essentially active at the optimum
    const Allocation a = solve_weighted_allocation(s, t, 0.1, 1e-8);
    CHECK(a.b.col(0).sum() == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(a.p.col(0).sum() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("per-slot separability: permuting slots permutes the solution") {
    Scenario s = two_user_scenario(250.0, 1200.0, 2);
    Trajectory t;
    t.q = {{0.0, 0.0}, {30.0, 0.0}};
    const Allocation fwd = solve_weighted_allocation(s, t, 0.05, 1e-8);
    Trajectory rev;
    rev.q = {{30.0, 0.0}, {0.0, 0.0}};
    const Allocation bwd = solve_weighted_allocation(s, rev, 0.05, 1e-8);
    CHECK((fwd.b.col(0) - bwd.b.col(1)).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((fwd.p.col(1) - bwd.p.col(0)).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("allocation_objective") {
    const Scenario s = two_user_scenario(200.0, 800.0);
    const Trajectory t = hover(2);
    Allocation zero;
    zero.b.setZero(2, 2);
    zero.p.setZero(2, 2);
    CHECK(allocation_objective(s, t, zero, 0.3) == 0.0);

    Allocation a = Allocation::uniform(2, 2);
    const Eigen::MatrixXd rates = rate_matrix(s, t, a);
    CHECK(allocation_objective(s, t, a, 0.0) == doctest::Approx(rates.mean()));
    CHECK(allocation_objective(s, t, a, kAlphaMaxMin) ==
          doctest::Approx(0.5 * (rates.col(0).minCoeff() + rates.col(1).minCoeff())));

    const Scenario one = fairtraj::testing::single_user_scenario(2);
    Allocation full;
    full.b.setOnes(1, 2);
    full.p.setOnes(1, 2);
    const Eigen::MatrixXd r1 = rate_matrix(one, hover(2), full);
    for (double alpha : {0.0, 0.7, 5.0}) {
        CHECK(allocation_objective(one, hover(2), full, alpha) ==
              doctest::Approx(r1.mean()).epsilon(1e-12));
    }
}

TEST_CASE("variance decreases with alpha at a fixed trajectory") {
    const Scenario s = two_user_scenario(150.0, 1400.0);
    const Trajectory t = hover(2);
    double prev_variance = -1.0;
    bool first = true;
    for (double alpha : {0.0, 0.05, 0.1, 0.2}) {
        const Allocation a = solve_weighted_allocation(s, t, alpha, 1e-8);
        const Eigen::VectorXd per_user = rate_matrix(s, t, a).rowwise().mean();
        const double variance = fairness_metrics(per_user).variance;
        if (!first) CHECK(variance <= prev_variance * 1.01);
        prev_variance = variance;
        first = false;
    }
}
