#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kyleq/model.hpp"
#include "kyleq/solution.hpp"

namespace kyleq {

/// A fixed-step integration result.  `values[i]` holds the state components
/// at `grid[i]`; the grid is strictly increasing, starts at 0 and ends at or
/// before T (short of T when the system is singular there).
struct OdeSolution {
    std::vector<double> grid;
    std::vector<std::vector<double>> values;  // values[i].size() == n_components
    double step = 0.0;
    std::string method = "rk4";
    bool truncated = false;  // true when integration stopped at T - delta_stop

    std::size_t size() const { return grid.size(); }
    double component(std::size_t i, std::size_t c) const { return values[i][c]; }

    /// Linear interpolation of one component; t must lie within the grid.
    double value_at(double t, std::size_t c) const;
};

/// Stop-short margin for systems singular at T: max(1e-6*T, one grid step).
double delta_stop(double T, int64_t n_steps);

/// RK4 on the raw autonomous system r' = -sigma_w^2 r^2 (1+r)(1+2r) / ((1+3r) Sigma1),
/// Sigma1' = -sigma_w^2 (r^2 + 2r), from (r0, sigma_a^2), on [0, T - delta_stop].
/// Never touches the closed forms.  Components: {r, Sigma1}.
OdeSolution integrate_r_sigma1(const ModelParams& params, double r0, int64_t n_steps);

/// RK4 of Sigma3' = -2*alpha(t)*Sigma3 + sigma_w^2 r(t)^2 from 0 on [0, T].
OdeSolution integrate_sigma3(const EquilibriumSolution& sol, int64_t n_steps);

/// RK4 of Sigma4' = -sigma_w^2 lambda(t)^2 from sigma_v^2 on [0, T].
OdeSolution integrate_sigma4(const EquilibriumSolution& sol, int64_t n_steps);

/// RK4 of the coupled conditional-mean system
///   f' = beta*(1 - f - g) + alpha*g,   g' = r*beta*(1 - f - g) - alpha*g
/// from (0, 0) on [0, T - delta_stop] (beta diverges at T).  Components: {f, g}.
OdeSolution integrate_fg(const EquilibriumSolution& sol, int64_t n_steps);

/// Backward RK4 of K' = -sigma_w^2 (I - J(t)) r(t)^2 from K(T) = 0, reported
/// on an ascending grid over [0, T].
OdeSolution integrate_K(const EquilibriumSolution& sol, int64_t n_steps);

}  // namespace kyleq
