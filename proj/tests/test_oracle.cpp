#include <cmath>

#include <doctest.h>

#include "kyleq/calibrate.hpp"
#include "kyleq/ode.hpp"

using namespace kyleq;

namespace {
const ModelParams kFig1{1.0, 1.0, 1.0, 0.3, 1.0};
}

TEST_CASE("raw (r, Sigma1) system reproduces the closed forms") {
    const EquilibriumSolution sol = build_solution(kFig1);
    const OdeSolution ode = integrate_r_sigma1(kFig1, sol.r0(), 20000);
    CHECK(ode.truncated);

    double gap_r = 0.0, gap_s1 = 0.0;
    for (std::size_t i = 0; i < ode.size(); ++i) {
        const double t = ode.grid[i];
        if (t > 1.0 - 1e-3) break;
        gap_r = std::max(gap_r, std::abs(ode.values[i][0] - sol.r(t)));
        gap_s1 = std::max(gap_s1, std::abs(ode.values[i][1] - sol.sigma1(t)));
        CHECK(ode.values[i][0] > 0.0);
        CHECK(ode.values[i][0] <= sol.r0());
    }
    CHECK(gap_r <= 1e-6);
    CHECK(gap_s1 <= 1e-6);
}

TEST_CASE("fourth-order convergence of the r integration") {
    const EquilibriumSolution sol = build_solution(kFig1);
    auto sup_gap = [&](int64_t n) {
        const OdeSolution ode = integrate_r_sigma1(kFig1, sol.r0(), n);
        double gap = 0.0;
        for (std::size_t i = 0; i < ode.size(); ++i) {
            if (ode.grid[i] > 0.95) break;
            gap = std::max(gap, std::abs(ode.values[i][0] - sol.r(ode.grid[i])));
        }
        return gap;
    };
    const double g1 = sup_gap(200), g2 = sup_gap(400), g3 = sup_gap(800);
    CHECK(std::log2(g1 / g2) > 3.0);
    CHECK(std::log2(g2 / g3) > 3.0);
    CHECK(std::log2(g1 / g2) < 5.5);
}

TEST_CASE("too-large r0 blows up before the horizon") {
    const EquilibriumSolution sol = build_solution(kFig1);
    CHECK_THROWS_AS(integrate_r_sigma1(kFig1, 2.0 * sol.r0(), 5000), ode_error);
}

TEST_CASE("Sigma3 stays nonnegative from a zero start") {
    const EquilibriumSolution sol = build_solution(kFig1);
    const OdeSolution s3 = integrate_sigma3(sol, 5000);
    CHECK(s3.values.front()[0] == 0.0);
    for (const auto& v : s3.values) CHECK(v[0] >= -1e-12);
    // Sigma3 grows from zero; its value at T is reported as a one-sided limit.
    CHECK(s3.values.back()[0] > 0.0);
}

TEST_CASE("Sigma4 decreases to its closed-form terminal value") {
    const EquilibriumSolution sol = build_solution(kFig1);
    const OdeSolution s4 = integrate_sigma4(sol, 5000);
    CHECK(s4.values.front()[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 1; i < s4.size(); ++i) CHECK(s4.values[i][0] < s4.values[i - 1][0]);

    const double r0 = sol.r0();
    const double rho2 = 0.09;
    const double expected =
        rho2 * std::sqrt(1.0 + 2.0 * r0) / ((1.0 + r0) * (1.0 + r0)) + (1.0 - rho2);
    CHECK(s4.values.back()[0] == doctest::Approx(expected).epsilon(1e-6));

    double gap = 0.0;
    for (std::size_t i = 0; i < s4.size(); ++i)
        gap = std::max(gap, std::abs(s4.values[i][0] - sol.sigma4(s4.grid[i])));
    CHECK(gap <= 1e-6);
}

TEST_CASE("raw conditional-mean system matches f and g") {
    const EquilibriumSolution sol = build_solution(kFig1);
    const OdeSolution fg = integrate_fg(sol, 20000);
    CHECK(fg.values.front()[0] == 0.0);
    CHECK(fg.values.front()[1] == 0.0);

    double gap_f = 0.0, gap_g = 0.0;
    for (std::size_t i = 0; i < fg.size(); ++i) {
        const double t = fg.grid[i];
        if (t > 1.0 - 1e-3) break;
        gap_f = std::max(gap_f, std::abs(fg.values[i][0] - sol.f(t)));
        gap_g = std::max(gap_g, std::abs(fg.values[i][1] - sol.g(t)));
    }
    CHECK(gap_f <= 1e-6);
    CHECK(gap_g <= 1e-6);

    // f(T-) + block fraction = 1.
    CHECK(fg.values.back()[0] + sol.block_fraction() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("backward K integration agrees with quadrature") {
    const EquilibriumSolution sol = build_solution(kFig1);
    const OdeSolution K = integrate_K(sol, 2000);
    CHECK(K.grid.front() == 0.0);
    CHECK(K.values.back()[0] == 0.0);
    CHECK(std::abs(K.values.front()[0] - sol.K(0.0)) <= 1e-8);
    for (std::size_t i = 0; i < K.size(); i += 100)
        CHECK(std::abs(K.values[i][0] - sol.K(K.grid[i])) <= 1e-8);
    // J > I, so K' > 0 pointwise.
    for (std::size_t i = 1; i < K.size(); ++i) CHECK(K.values[i][0] >= K.values[i - 1][0]);
}

TEST_CASE("ode plumbing rejects bad arguments") {
    const EquilibriumSolution sol = build_solution(kFig1);
    CHECK_THROWS_AS(integrate_sigma3(sol, 50), domain_error);
    CHECK_THROWS_AS(integrate_r_sigma1(kFig1, -1.0, 5000), domain_error);

    const OdeSolution s3 = integrate_sigma3(sol, 200);
    CHECK(s3.value_at(0.0, 0) == 0.0);
    CHECK(s3.value_at(1.0, 0) == s3.values.back()[0]);
    CHECK_THROWS_AS(s3.value_at(1.5, 0), domain_error);
    CHECK_THROWS_AS(s3.value_at(-0.5, 0), domain_error);
}
