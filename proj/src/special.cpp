#include "kyleq/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace kyleq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite_nonneg(double x, const char* fn) {
    if (!std::isfinite(x) || x < 0.0)
        throw domain_error(std::string(fn) + ": argument must be finite and >= 0");
}

}  // namespace

double phase_F(double x) {
    require_finite_nonneg(x, "phase_F");
    const double u = std::sqrt(1.0 + 2.0 * x);
    const double onepx = 1.0 + x;
    return 4.0 * std::atan(u) - u * (3.0 + 4.0 * x) / (onepx * onepx);
}

double phase_F_prime(double x) {
    require_finite_nonneg(x, "phase_F_prime");
    const double u = std::sqrt(1.0 + 2.0 * x);
    const double onepx = 1.0 + x;
    return (1.0 + 3.0 * x) * u / (onepx * onepx * onepx);
}

double phase_F_inverse(double y) {
    if (!std::isfinite(y) || y < kPhaseMin || y >= kTwoPi)
        throw domain_error("phase_F_inverse: argument must lie in [pi-3, 2*pi)");
    if (y == kPhaseMin) return 0.0;

    // Bracket [lo, hi] with phase_F(hi) >= y, growing hi geometrically.
    double lo = 0.0;
    double hi = std::max(y - kPhaseMin, 1.0);
    int expansions = 0;
    while (phase_F(hi) < y) {
        lo = hi;
        hi *= 2.0;
        if (++expansions > 200)
            throw domain_error("phase_F_inverse: bracket expansion exceeded 200 doublings");
    }

    // Initial guess: linear near the left endpoint, asymptotic tail otherwise.
    double x;
    if (y - kPhaseMin < 1.0) {
        x = y - kPhaseMin;  // phase_F'(0) = 1
    } else {
        const double u = 12.0 / (kTwoPi - y);  // phase_F(x) ~ 2*pi - 12/sqrt(1+2x)
        x = 0.5 * (u * u - 1.0);
    }
    x = std::min(std::max(x, lo), hi);

    const double tol = 1e-14 * std::max(1.0, std::abs(y));
    for (int it = 0; it < 200; ++it) {
        const double fx = phase_F(x) - y;
        if (std::abs(fx) <= tol) return x;
        if (fx > 0.0) hi = x; else lo = x;
        const double step = fx / phase_F_prime(x);
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
        if (next == x) return x;                                // bracket exhausted
        x = next;
    }
    return x;
}

double shape_G(double x) {
    require_finite_nonneg(x, "shape_G");
    const double onepx = 1.0 + x;
    const double w = 1.0 + 2.0 * x;
    return x * x * w * std::sqrt(w) / (onepx * onepx);
}

double shape_G_prime(double x) {
    require_finite_nonneg(x, "shape_G_prime");
    if (x == 0.0) return 0.0;
    return shape_G(x) * (2.0 / x + 3.0 / (1.0 + 2.0 * x) - 2.0 / (1.0 + x));
}

double horizon_tau(double x, const ModelParams& params) {
    if (!std::isfinite(x) || x <= 0.0)
        throw domain_error("horizon_tau: argument must be finite and > 0");
    const double ratio = (params.sigma_a * params.sigma_a) / (params.sigma_w * params.sigma_w);
    return ratio * (phase_F(x) - kPhaseMin) / shape_G(x);
}

double horizon_tau_prime(double x, const ModelParams& params) {
    if (!std::isfinite(x) || x <= 0.0)
        throw domain_error("horizon_tau_prime: argument must be finite and > 0");
    const double ratio = (params.sigma_a * params.sigma_a) / (params.sigma_w * params.sigma_w);
    const double g = shape_G(x);
    const double num = phase_F_prime(x) * g - (phase_F(x) - kPhaseMin) * shape_G_prime(x);
    return ratio * num / (g * g);
}

}  // namespace kyleq
