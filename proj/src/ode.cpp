#include "kyleq/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace kyleq {

double OdeSolution::value_at(double t, std::size_t c) const {
    if (grid.empty() || t < grid.front() - 1e-12 || t > grid.back() + 1e-12)
        throw domain_error("OdeSolution::value_at: t outside grid");
    const auto it = std::lower_bound(grid.begin(), grid.end(), t);
    if (it == grid.begin()) return values.front()[c];
    if (it == grid.end()) return values.back()[c];
    const std::size_t i = static_cast<std::size_t>(it - grid.begin());
    const double t1 = grid[i - 1], t2 = grid[i];
    const double w = (t - t1) / (t2 - t1);
    return (1.0 - w) * values[i - 1][c] + w * values[i][c];
}

double delta_stop(double T, int64_t n_steps) {
    return std::max(1e-6 * T, T / static_cast<double>(n_steps));
}

namespace {

template <std::size_t N, class Rhs>
OdeSolution rk4(Rhs rhs, std::array<double, N> y, double t0, double t1, int64_t n_steps,
                const char* name) {
    OdeSolution out;
    const double h = (t1 - t0) / static_cast<double>(n_steps);
    out.step = h;
    out.grid.reserve(static_cast<std::size_t>(n_steps) + 1);
    out.values.reserve(static_cast<std::size_t>(n_steps) + 1);

    auto push = [&](double t, const std::array<double, N>& s) {
        for (double v : s)
            if (!std::isfinite(v))
                throw ode_error(std::string(name) + ": non-finite state at t = " + std::to_string(t));
        out.grid.push_back(t);
        out.values.emplace_back(s.begin(), s.end());
    };

    push(t0, y);
    for (int64_t i = 0; i < n_steps; ++i) {
        const double t = t0 + h * static_cast<double>(i);
        std::array<double, N> k1 = rhs(t, y);
        std::array<double, N> y2, y3, y4;
        for (std::size_t c = 0; c < N; ++c) y2[c] = y[c] + 0.5 * h * k1[c];
        std::array<double, N> k2 = rhs(t + 0.5 * h, y2);
        for (std::size_t c = 0; c < N; ++c) y3[c] = y[c] + 0.5 * h * k2[c];
        std::array<double, N> k3 = rhs(t + 0.5 * h, y3);
        for (std::size_t c = 0; c < N; ++c) y4[c] = y[c] + h * k3[c];
        std::array<double, N> k4 = rhs(t + h, y4);
        for (std::size_t c = 0; c < N; ++c)
            y[c] += (h / 6.0) * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        push(t0 + h * static_cast<double>(i + 1), y);
    }
    return out;
}

void require_steps(int64_t n_steps) {
    if (n_steps < 100) throw domain_error("ode: n_steps must be >= 100");
}

}  // namespace

OdeSolution integrate_r_sigma1(const ModelParams& params, double r0, int64_t n_steps) {
    require_steps(n_steps);
    if (!(r0 > 0.0)) throw domain_error("integrate_r_sigma1: r0 must be > 0");
    const double sw2 = params.sigma_w * params.sigma_w;
    const double stop = params.T - delta_stop(params.T, n_steps);
    auto rhs = [sw2](double, const std::array<double, 2>& y) -> std::array<double, 2> {
        const double r = y[0], s1 = y[1];
        if (!(s1 > 0.0) || !(r > 0.0))
            throw ode_error("integrate_r_sigma1: state left the positive quadrant before T");
        const double rp = -sw2 * r * r * (1.0 + r) * (1.0 + 2.0 * r) / ((1.0 + 3.0 * r) * s1);
        const double s1p = -sw2 * (r * r + 2.0 * r);
        return {rp, s1p};
    };
    OdeSolution out = rk4<2>(rhs, {r0, params.sigma_a * params.sigma_a}, 0.0, stop, n_steps,
                             "integrate_r_sigma1");
    out.truncated = true;
    return out;
}

OdeSolution integrate_sigma3(const EquilibriumSolution& sol, int64_t n_steps) {
    require_steps(n_steps);
    const double sw2 = sol.params().sigma_w * sol.params().sigma_w;
    auto rhs = [&sol, sw2](double t, const std::array<double, 1>& y) -> std::array<double, 1> {
        const double rt = sol.r(t);
        return {-2.0 * sol.alpha(t) * y[0] + sw2 * rt * rt};
    };
    return rk4<1>(rhs, {0.0}, 0.0, sol.params().T, n_steps, "integrate_sigma3");
}

OdeSolution integrate_sigma4(const EquilibriumSolution& sol, int64_t n_steps) {
    require_steps(n_steps);
    const double sw2 = sol.params().sigma_w * sol.params().sigma_w;
    auto rhs = [&sol, sw2](double t, const std::array<double, 1>&) -> std::array<double, 1> {
        const double l = sol.lambda(t);
        return {-sw2 * l * l};
    };
    const double sv = sol.params().sigma_v;
    return rk4<1>(rhs, {sv * sv}, 0.0, sol.params().T, n_steps, "integrate_sigma4");
}

OdeSolution integrate_fg(const EquilibriumSolution& sol, int64_t n_steps) {
    require_steps(n_steps);
    const double stop = sol.params().T - delta_stop(sol.params().T, n_steps);
    auto rhs = [&sol](double t, const std::array<double, 2>& y) -> std::array<double, 2> {
        const double b = sol.beta(t);
        const double a = sol.alpha(t);
        const double gap = 1.0 - y[0] - y[1];
        return {b * gap + a * y[1], sol.r(t) * b * gap - a * y[1]};
    };
    OdeSolution out = rk4<2>(rhs, {0.0, 0.0}, 0.0, stop, n_steps, "integrate_fg");
    out.truncated = true;
    return out;
}

OdeSolution integrate_K(const EquilibriumSolution& sol, int64_t n_steps) {
    require_steps(n_steps);
    const double T = sol.params().T;
    const double sw2 = sol.params().sigma_w * sol.params().sigma_w;
    // Integrate v(s) = K(T - s) forward from v(0) = 0.
    auto rhs = [&sol, sw2, T](double sback, const std::array<double, 1>&) -> std::array<double, 1> {
        const double t = T - sback;
        const double rt = sol.r(t);
        return {sw2 * (sol.I() - sol.J(t)) * rt * rt};
    };
    OdeSolution back = rk4<1>(rhs, {0.0}, 0.0, T, n_steps, "integrate_K");
    OdeSolution out;
    out.step = back.step;
    const std::size_t n = back.size();
    out.grid.resize(n);
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.grid[i] = T - back.grid[n - 1 - i];
        out.values[i] = back.values[n - 1 - i];
    }
    out.grid.front() = 0.0;
    return out;
}

}  // namespace kyleq
