#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kyleq/solution.hpp"

namespace kyleq {

struct Check {
    std::string name;
    double magnitude;   // the measured residual / margin / order
    double tolerance;   // the bound it was held to (0 for sign checks)
    bool pass;
};

struct VerifyOptions {
    int grid_n = 1000;               // residual / identity grid
    int64_t oracle_steps = 100000;   // fine RK4 re-integration
    int64_t order_steps = 200;       // coarsest step count of the order triple
    double j_perturb = 0.0;          // test hook: scales J by (1 + j_perturb)
};

/// The full invariant suite: HJB residuals, filtering identities, terminal
/// facts, sign pattern, boundedness, oracle equivalence with observed RK4
/// convergence orders, and the Sigma2 cross-consistency check.
std::vector<Check> run_invariant_suite(const EquilibriumSolution& sol,
                                       const VerifyOptions& opt = {});

bool all_pass(const std::vector<Check>& checks);

}  // namespace kyleq
