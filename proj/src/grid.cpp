#include "kyleq/grid.hpp"

#include <cmath>
#include <limits>

#include "kyleq/ode.hpp"

namespace kyleq {

CoefficientGrid sample_grid(const EquilibriumSolution& sol, int64_t n) {
    if (n < 2) throw domain_error("sample_grid: n must be >= 2");
    const double T = sol.params().T;
    const std::size_t count = static_cast<std::size_t>(n);

    // Sigma3 has no closed form; integrate it on a refinement of this grid.
    const int64_t refine = std::max<int64_t>(1, (1000 + n - 2) / (n - 1));
    const OdeSolution sigma3 = integrate_sigma3(sol, (n - 1) * refine);

    CoefficientGrid grid;
    auto reserve = [count](std::vector<double>& v) { v.resize(count); };
    reserve(grid.t);
    reserve(grid.r);
    reserve(grid.sigma1);
    reserve(grid.sigma2);
    reserve(grid.sigma3);
    reserve(grid.sigma4);
    reserve(grid.lambda);
    reserve(grid.mu);
    reserve(grid.beta);
    reserve(grid.s);
    reserve(grid.alpha);
    reserve(grid.J);
    reserve(grid.K);
    reserve(grid.f);
    reserve(grid.g);
    reserve(grid.f_prime);
    reserve(grid.remaining_variance);

    for (std::size_t i = 0; i < count; ++i) {
        const bool last = (i + 1 == count);
        const double t = last ? T : T * static_cast<double>(i) / static_cast<double>(n - 1);
        grid.t[i] = t;
        grid.r[i] = sol.r(t);
        grid.sigma1[i] = sol.sigma1(t);
        grid.sigma2[i] = sol.sigma2(t);
        grid.sigma3[i] = sigma3.values[i * static_cast<std::size_t>(refine)][0];
        grid.sigma4[i] = sol.sigma4(t);
        grid.lambda[i] = sol.lambda(t);
        grid.mu[i] = sol.mu(t);
        grid.beta[i] = last ? std::numeric_limits<double>::quiet_NaN() : sol.beta(t);
        grid.s[i] = sol.s(t);
        grid.alpha[i] = sol.alpha(t);
        grid.J[i] = sol.J(t);
        grid.K[i] = sol.K(t);
        grid.f[i] = sol.f(t);
        grid.g[i] = sol.g(t);
        grid.f_prime[i] = sol.f_prime(t);
        grid.remaining_variance[i] = sol.remaining_variance(t);
    }
    return grid;
}

}  // namespace kyleq
