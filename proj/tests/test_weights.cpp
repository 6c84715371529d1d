#include <catch2/catch_amalgamated.hpp>

#include "charsum/bump.hpp"
#include "charsum/quadrature.hpp"

#include <cmath>

using namespace charsum;

TEST_CASE("smooth_step: range, symmetry, monotonicity") {
    REQUIRE(smooth_step(-1.0) == 0.0);
    REQUIRE(smooth_step(0.0) == 0.0);
    REQUIRE(smooth_step(1.0) == 1.0);
    REQUIRE(smooth_step(2.5) == 1.0);
    REQUIRE(smooth_step(0.5) == Catch::Approx(0.5).margin(1e-15));
    double prev = -1.0;
    for (int i = 0; i <= 400; ++i) {
        const double t = i / 400.0;
        const double s = smooth_step(t);
        REQUIRE(s >= prev - 1e-15);
        REQUIRE(std::abs(smooth_step(t) + smooth_step(1.0 - t) - 1.0) < 1e-14);
        prev = s;
    }
}

TEST_CASE("smooth_step_deriv matches finite differences") {
    const double h = 1e-6;
    for (double t : {0.08, 0.2, 0.35, 0.5, 0.71, 0.9, 0.97}) {
        const double fd = (smooth_step(t + h) - smooth_step(t - h)) / (2.0 * h);
        REQUIRE(smooth_step_deriv(t) == Catch::Approx(fd).epsilon(1e-6).margin(1e-9));
    }
    REQUIRE(smooth_step_deriv(0.0) == 0.0);
    REQUIRE(smooth_step_deriv(1.0) == 0.0);
}

TEST_CASE("delta bump omega: support, frozen sample, unit mass") {
    BumpOmega omega;
    REQUIRE(omega(0.5) == 0.0);
    REQUIRE(omega(1.0) == 0.0);
    REQUIRE(omega(0.49) == 0.0);
    REQUIRE(omega(1.3) == 0.0);
    // frozen from a 50-digit evaluation of c_w exp(-1/((t-1/2)(1-t))) at t=3/4
    REQUIRE(omega(0.75) == Catch::Approx(9.424688985848676612702).epsilon(1e-12));
    const auto mass = integrate_real([&](double t) { return omega(t); }, 0.5, 1.0, 1e-11);
    REQUIRE(mass.converged);
    REQUIRE(mass.value == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("window supports and plateaus") {
    const SmoothWeight& W = weight_W();
    const SmoothWeight& V = weight_V();
    const SmoothWeight& U = weight_U();

    REQUIRE(W.support().first == Catch::Approx(1.0));
    REQUIRE(W.support().second == Catch::Approx(2.0));
    REQUIRE(W(0.999) == 0.0);
    REQUIRE(W(2.001) == 0.0);
    REQUIRE(W(std::sqrt(2.0)) == Catch::Approx(1.0).margin(1e-12));

    REQUIRE(V(0.499) == 0.0);
    REQUIRE(V(3.001) == 0.0);
    for (double t : {1.0, 1.2, 1.5, 1.8, 2.0})
        REQUIRE(V(t) == 1.0);

    REQUIRE(U(0.3) == 0.0);
    REQUIRE(U(-0.3) == 0.0);
    REQUIRE(U(2.2) == 0.0);
    for (double t : {0.6, 0.9, 1.1, 1.7})
        REQUIRE(U(t) == Catch::Approx(U(-t)).margin(0.0));
    REQUIRE(U(1.0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("dyadic partition of unity for W on the square-root scale") {
    const SmoothWeight& W = weight_W();
    for (double t : {1.0, 1.07, 2.3, 5.9, 41.5, 100.0, 8191.5}) {
        double total = 0.0;
        const int top = static_cast<int>(2.0 * std::log2(t)) + 6;
        for (int nu = -1; nu <= top; ++nu)
            total += W(t / std::pow(2.0, nu / 2.0));
        REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("dyadic partition of unity for U on the integer scale") {
    const SmoothWeight& U = weight_U();
    for (double t : {1.0, 1.6, 3.9, 17.2, 300.0}) {
        double total = 0.0;
        const int top = static_cast<int>(std::log2(t)) + 4;
        for (int nu = 0; nu <= top; ++nu)
            total += U(t / std::pow(2.0, nu));
        REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("weight derivatives match finite differences") {
    const double h = 1e-6;
    for (const SmoothWeight* w : {&weight_W(), &weight_V(), &weight_U()}) {
        for (double t : {0.7, 1.1, 1.3, 1.9, 2.4}) {
            if ((*w)(t) == 0.0 && (*w)(t + 3 * h) == 0.0 && (*w)(t - 3 * h) == 0.0) continue;
            const double fd = ((*w)(t + h) - (*w)(t - h)) / (2.0 * h);
            REQUIRE(w->derivative(1, t) == Catch::Approx(fd).epsilon(1e-5).margin(1e-8));
        }
    }
    // second order via differences of the analytic first order
    const SmoothWeight& V = weight_V();
    for (double t : {0.6, 0.8, 2.3, 2.7}) {
        const double fd = (V.derivative(1, t + h) - V.derivative(1, t - h)) / (2.0 * h);
        REQUIRE(V.derivative(2, t) == Catch::Approx(fd).epsilon(1e-3).margin(1e-4));
    }
}

TEST_CASE("derivative bounds used by the tail estimates stay moderate") {
    // sup |d^j W| over the support enters truncation bookkeeping; keep a
    // regression pin on the first two orders.
    const SmoothWeight& W = weight_W();
    double d1 = 0.0, d2 = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double t = 1.0 + i / 2000.0;
        d1 = std::max(d1, std::abs(W.derivative(1, t)));
        d2 = std::max(d2, std::abs(W.derivative(2, t)));
    }
    REQUIRE(d1 < 7.0);
    REQUIRE(d2 < 60.0);
}
