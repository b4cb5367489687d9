#pragma once

#include <optional>

#include "kyleq/model.hpp"

namespace kyleq {

/// Pricing-rule and strategy coefficients at one time.  beta is absent at
/// t = T where it is undefined (the terminal trade is the block order).
struct Coefficients {
    double lambda;
    double mu;
    double s;
    double alpha;
    double J;
    std::optional<double> beta;
};

/// Calibrated equilibrium: the initial gain r0 with horizon_tau(r0) = T, the
/// value-function constant I, and closed-form evaluators for every
/// time-dependent coefficient on [0, T].  Immutable and safe to share across
/// threads.
class EquilibriumSolution {
public:
    EquilibriumSolution(const ModelParams& params, double r0);

    const ModelParams& params() const { return params_; }
    double r0() const { return r0_; }
    double I() const { return I_; }

    /// Gain coefficient r(t), strictly decreasing from r0 to 0.
    double r(double t) const;
    /// r'(t) = -kappa*(1+r)^3 / ((1+3r)*sqrt(1+2r)), finite on [0, T].
    double r_prime(double t) const;

    double sigma1(double t) const;   // remaining variance of a - theta, sigma_a^2 -> 0
    double sigma2(double t) const;   // remaining covariance with v - P, rho*sigma_a*sigma_v -> 0
    double sigma4(double t) const;   // E[(v - P)^2]
    double remaining_variance(double t) const;  // sigma4 - (1 - rho^2)*sigma_v^2

    double lambda(double t) const;       // price impact, defined on [0, T], lambda(T) = 2I
    double lambda_prime(double t) const; // strictly negative on (0, T)
    double mu(double t) const;
    double beta(double t) const;         // requires t < T; diverges like 1/r(t)
    double s(double t) const;
    double alpha(double t) const;
    double J(double t) const;            // lambda / (1 + r)
    double K(double t) const;            // sigma_w^2 * int_t^T (I - J) r^2 du, adaptive quadrature

    Coefficients coefficients_at(double t) const;

    /// Normalized conditional means of theta_t and Q_t given the target draw.
    double f(double t) const;
    double g(double t) const;
    /// f'(t) in the cancellation-free form kappa*c1*(1+r)^2/(1+2r) + alpha*g,
    /// algebraically equal to beta*(1 - f - g) + alpha*g and finite on [0, T].
    double f_prime(double t) const;

    /// Fraction of the target executed by the terminal block order,
    /// (sqrt(1+2r0) - 1 + r0*(r0-1)) / (r0*(1+2r0)), in (0, 1).
    double block_fraction() const;

    /// Limit of the normalized covariance of consecutive aggregate-holdings
    /// increments: alpha*(alpha*sigma3/sigma_w^2 + r).  sigma3 = E[Q_t^2] has
    /// no closed form and must be supplied (see kyleq::integrate_sigma3).
    double scaled_autocorrelation(double t, double sigma3) const;

    /// Closed form of beta(t)^2 * sigma1(t) = sigma_w^2*kappa*(1+r)^2/(1+2r)^(3/2),
    /// bounded on [0, T).
    double beta_sq_sigma1(double t) const;

    /// Decay constant kappa = sigma_w^2 * shape_G(r0) / sigma_a^2; the shared
    /// prefactor of beta, s, alpha and the slope of the phase argument.
    double kappa() const { return kappa_; }

private:
    double r_from_phase(double t) const;
    void check_time(double t, const char* fn) const;

    ModelParams params_;
    double r0_;
    double I_;
    double kappa_;     // sigma_w^2 * G(r0) / sigma_a^2
    double phase_r0_;  // phase_F(r0)
    double G_r0_;
    double c1_;        // 1 / (r0*sqrt(1+2r0))
    double c2_;        // (1 + r0 - r0^2) / (r0*(1+2r0))
};

}  // namespace kyleq
