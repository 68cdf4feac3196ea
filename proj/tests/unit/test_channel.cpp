#include <doctest.h>

#include <cmath>
#include <random>

#include "fairtraj/allocation.hpp"
#include "fairtraj/channel.hpp"
#include "test_scenarios.hpp"

using namespace fairtraj;

namespace {
const RicianParams kParams{0.0, 1.0, -4.3221, 6.0750};
}

TEST_CASE("distance") {
    CHECK(distance({0, 0}, {0, 0}, 500.0) == 500.0);
    CHECK(distance({300, 400}, {0, 0}, 500.0) == doctest::Approx(std::sqrt(500000.0)));
    CHECK(distance({7, -3}, {7, -3}, 123.0) == 123.0);
}

TEST_CASE("elevation_ratio") {
    CHECK(elevation_ratio({0, 0}, {0, 0}, 500.0) == 1.0);
    CHECK(elevation_ratio({500, 0}, {0, 0}, 500.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    // monotone decay toward 0 with horizontal distance
    double prev = 1.0;
    for (double x = 100.0; x <= 1e6; x *= 10.0) {
        const double th = elevation_ratio({x, 0}, {0, 0}, 500.0);
        CHECK(th < prev);
        prev = th;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("theta consistency: elevation_ratio * distance == H") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> pos(-2000.0, 2000.0);
    for (int i = 0; i < 100; ++i) {
        const Eigen::Vector2d q{pos(rng), pos(rng)};
        const Eigen::Vector2d w{pos(rng), pos(rng)};
        CHECK(elevation_ratio(q, w, 500.0) * distance(q, w, 500.0) ==
              doctest::Approx(500.0).epsilon(1e-14));
    }
}

TEST_CASE("effective_fading") {
    CHECK(effective_fading(1.0, kParams) ==
          doctest::Approx(1.0 / (1.0 + std::exp(-1.7529))).epsilon(1e-10));
    CHECK(effective_fading(1.0, kParams) == doctest::Approx(0.85236).epsilon(1e-4));
    CHECK(effective_fading(1e-12, kParams) == doctest::Approx(0.01309).epsilon(1e-3));
    CHECK(effective_fading(0.7, {0.3, 0.0, -4.0, 6.0}) == 0.3);  // c2 = 0
    // monotone in theta for b2 > 0
    double prev = 0.0;
    for (double th = 0.05; th <= 1.0; th += 0.05) {
        const double f = effective_fading(th, kParams);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("rate basics") {
    CHECK(rate(0.0, 0.7, 100.0) == 0.0);
    const double gain = 0.85236 * 7.943e6 / (500.0 * 500.0);
    CHECK(rate(1.0, 1.0, gain) == doctest::Approx(4.812).epsilon(1e-3));
    CHECK(rate(0.5, 0.5, gain) == doctest::Approx(0.5 * rate(1.0, 1.0, gain)));
}

TEST_CASE("rate homogeneity and monotonicity") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    std::uniform_real_distribution<double> gains(0.1, 100.0);
    for (int i = 0; i < 200; ++i) {
        const double b = unit(rng), p = unit(rng), g = gains(rng), t = unit(rng);
        CHECK(rate(t * b, t * p, g) == doctest::Approx(t * rate(b, p, g)).epsilon(1e-12));
        const double h = 1e-6;
        CHECK(rate(b, p + h, g) >= rate(b, p, g));
        CHECK(rate(b, p, g + h) >= rate(b, p, g));
        CHECK(rate(b + h, p, g) >= rate(b, p, g) - 1e-15);
    }
}

TEST_CASE("rate_matrix") {
    const Scenario s = fairtraj::testing::single_user_scenario(5);
    Trajectory hover;
    hover.q.assign(5, {0.0, 0.0});

    Allocation zero;
    zero.b.setZero(1, 5);
    zero.p.setZero(1, 5);
    CHECK(rate_matrix(s, hover, zero).isZero());

    Allocation full;
    full.b.setOnes(1, 5);
    full.p.setOnes(1, 5);
    const Eigen::MatrixXd r = rate_matrix(s, hover, full);
    for (int n = 0; n < 5; ++n) {
        CHECK(r(0, n) == doctest::Approx(4.812).epsilon(1e-3));
    }

    Allocation half;
    half.b.setConstant(1, 5, 0.5);
    half.p.setConstant(1, 5, 0.5);
    CHECK(rate_matrix(s, hover, half)(0, 0) == doctest::Approx(0.5 * r(0, 0)));
}

TEST_CASE("channel gain shrinks with horizontal offset") {
    const Scenario s = fairtraj::testing::single_user_scenario(3);
    double prev = 1e18;
    for (double x : {0.0, 200.0, 500.0, 1500.0, 4000.0}) {
        Trajectory t;
        t.q.assign(3, {x, 0.0});
        const RateContext ctx = RateContext::build(s, t);
        CHECK(ctx.gain(0, 0) < prev);
        prev = ctx.gain(0, 0);
    }
}
