#pragma once

#include "kyleq/model.hpp"

namespace kyleq {

// Special functions behind the autonomous (r, Sigma1) system.  phase_F is a
// strictly increasing bijection [0,inf) -> [pi-3, 2*pi); its inverse recovers
// the filter-gain coefficient r(t) from elapsed scaled time.  shape_G fixes
// the remaining-variance profile, and horizon_tau(x) is the horizon length
// that an initial gain x would generate.

inline constexpr double kPhaseMin = 0.14159265358979312;  // pi - 3, value of phase_F(0)

/// phase_F(x) = 4*atan(sqrt(1+2x)) - sqrt(1+2x)*(3+4x)/(1+x)^2 for x >= 0.
double phase_F(double x);

/// d/dx phase_F = (1+3x)*sqrt(1+2x)/(1+x)^3, strictly positive on [0,inf).
double phase_F_prime(double x);

/// Inverse of phase_F on [pi-3, 2*pi).  Safeguarded Newton with a geometric
/// bracket expansion; |phase_F(x) - y| <= 1e-12 * max(1, |y|) on return.
double phase_F_inverse(double y);

/// shape_G(x) = x^2*(1+2x)^(3/2)/(1+x)^2 for x >= 0 (0 at x = 0 by continuity).
double shape_G(double x);

/// d/dx shape_G = shape_G(x) * (2/x + 3/(1+2x) - 2/(1+x)); 0 at x = 0.
double shape_G_prime(double x);

/// horizon_tau(x) = sigma_a^2 * (phase_F(x) - phase_F(0)) / (sigma_w^2 * shape_G(x)),
/// for x > 0.  Continuous, diverges as x -> 0+ and vanishes as x -> inf.
double horizon_tau(double x, const ModelParams& params);

/// d/dx horizon_tau, from the closed forms of phase_F' and shape_G'.
double horizon_tau_prime(double x, const ModelParams& params);

}  // namespace kyleq
