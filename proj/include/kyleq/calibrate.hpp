#pragma once

#include <utility>

#include "kyleq/model.hpp"
#include "kyleq/solution.hpp"

namespace kyleq {

struct CalibrationResult {
    double r0;
    double residual;    // |horizon_tau(r0) - T|
    int iterations;     // bisection + Newton steps after bracketing
    std::pair<double, double> bracket;  // final bracketing interval
};

/// Solve horizon_tau(r0) = T for r0 > 0.  Scans outward from x = 1 by
/// geometric expansion until the sign of tau - T changes, bisects the
/// resulting bracket to 1e-8, then polishes with Newton (analytic tau');
/// falls back to pure bisection if Newton leaves the bracket.  The residual
/// on return satisfies |tau(r0) - T| <= 1e-12 * max(1, T).  Deterministic.
/// Throws calibration_error when bracketing fails (pathological parameters).
CalibrationResult calibrate_r0(const ModelParams& params);

/// Calibrate and assemble the immutable solution object.
EquilibriumSolution build_solution(const ModelParams& params);

}  // namespace kyleq
