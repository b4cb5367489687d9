#pragma once

#include <cstdint>
#include <vector>

#include "kyleq/solution.hpp"

namespace kyleq {

/// Coefficient curves sampled on the uniform grid t_i = i*T/(n-1).  beta is
/// undefined at the final point and holds NaN there (exported as a blank
/// field).  Sigma3 comes from the RK4 oracle; everything else is closed form.
struct CoefficientGrid {
    std::vector<double> t;
    std::vector<double> r, sigma1, sigma2, sigma3, sigma4;
    std::vector<double> lambda, mu, beta, s, alpha, J, K;
    std::vector<double> f, g, f_prime, remaining_variance;

    std::size_t size() const { return t.size(); }
};

CoefficientGrid sample_grid(const EquilibriumSolution& sol, int64_t n);

}  // namespace kyleq
