#include "kyleq/calibrate.hpp"

#include <cmath>
#include <limits>

#include "kyleq/special.hpp"

namespace kyleq {

CalibrationResult calibrate_r0(const ModelParams& params) {
    params.validate();
    const double T = params.T;
    const double tol = 1e-12 * std::max(1.0, T);
    auto h = [&](double x) { return horizon_tau(x, params) - T; };

    // Bracket by geometric expansion from x = 1.  tau -> inf as x -> 0+ and
    // tau -> 0 as x -> inf, so a sign change always exists along one side.
    double lo, hi;
    {
        double x = 1.0;
        double hx = h(x);
        if (hx == 0.0) {
            return CalibrationResult{x, 0.0, 0, {x, x}};
        } else if (hx > 0.0) {
            // tau(1) > T: root lies to the right.
            lo = x;
            hi = 2.0 * x;
            int n = 0;
            while (h(hi) > 0.0) {
                lo = hi;
                hi *= 2.0;
                if (++n > 200 || !std::isfinite(hi))
                    throw calibration_error("calibrate_r0: bracket expansion exceeded 200 doublings");
            }
        } else {
            hi = x;
            lo = 0.5 * x;
            int n = 0;
            while (h(lo) < 0.0) {
                hi = lo;
                lo *= 0.5;
                if (++n > 200 || lo <= 0.0)
                    throw calibration_error("calibrate_r0: bracket expansion exceeded 200 halvings");
            }
        }
    }
    const std::pair<double, double> first_bracket{lo, hi};

    int iterations = 0;
    double x = 0.5 * (lo + hi);

    // Bisection until the bracket is narrow enough for Newton.
    while (hi - lo > 1e-8 * std::max(1.0, x) && iterations < 200) {
        x = 0.5 * (lo + hi);
        const double hx = h(x);
        ++iterations;
        if (hx == 0.0) return CalibrationResult{x, 0.0, iterations, first_bracket};
        if (hx > 0.0) lo = x; else hi = x;
    }

    // Newton polish with the analytic derivative, safeguarded by the bracket.
    x = 0.5 * (lo + hi);
    bool newton_ok = true;
    for (; iterations < 200; ++iterations) {
        const double hx = h(x);
        if (std::abs(hx) <= tol) return CalibrationResult{x, std::abs(hx), iterations, {lo, hi}};
        if (hx > 0.0) lo = x; else hi = x;
        const double next = x - hx / horizon_tau_prime(x, params);
        if (!(next > lo && next < hi)) { newton_ok = false; break; }
        if (next == x) return CalibrationResult{x, std::abs(hx), iterations, {lo, hi}};
        x = next;
    }

    if (!newton_ok) {
        // Pure bisection down to the residual target.
        for (; iterations < 400; ++iterations) {
            x = 0.5 * (lo + hi);
            const double hx = h(x);
            if (std::abs(hx) <= tol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * x)
                return CalibrationResult{x, std::abs(hx), iterations, {lo, hi}};
            if (hx > 0.0) lo = x; else hi = x;
        }
    }

    const double hx = std::abs(h(x));
    if (hx <= tol) return CalibrationResult{x, hx, iterations, {lo, hi}};
    throw calibration_error("calibrate_r0: residual target not reached");
}

EquilibriumSolution build_solution(const ModelParams& params) {
    const CalibrationResult cal = calibrate_r0(params);
    return EquilibriumSolution(params, cal.r0);
}

}  // namespace kyleq
