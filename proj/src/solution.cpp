#include "kyleq/solution.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kyleq/special.hpp"

namespace kyleq {

EquilibriumSolution::EquilibriumSolution(const ModelParams& params, double r0)
    : params_(params), r0_(r0) {
    if (!std::isfinite(r0) || r0 <= 0.0)
        throw domain_error("EquilibriumSolution: r0 must be finite and > 0");
    const double sa = params_.sigma_a, sw = params_.sigma_w, sv = params_.sigma_v;
    const double onep = 1.0 + r0_;
    I_ = (params_.rho * sv / sa) * r0_ * (1.0 + 2.0 * r0_) / (2.0 * onep * onep);
    G_r0_ = shape_G(r0_);
    kappa_ = sw * sw * G_r0_ / (sa * sa);
    phase_r0_ = phase_F(r0_);
    c1_ = 1.0 / (r0_ * std::sqrt(1.0 + 2.0 * r0_));
    c2_ = (1.0 + r0_ - r0_ * r0_) / (r0_ * (1.0 + 2.0 * r0_));
}

void EquilibriumSolution::check_time(double t, const char* fn) const {
    if (!std::isfinite(t) || t < 0.0 || t > params_.T)
        throw domain_error(std::string(fn) + ": t must lie in [0, T]");
}

double EquilibriumSolution::r_from_phase(double t) const {
    // Rounding at t = T can push the phase a hair below phase_F(0); clamp
    // into the inverse's domain and clamp the result at 0.
    double y = phase_r0_ - kappa_ * t;
    if (y < kPhaseMin) y = kPhaseMin;
    return std::max(phase_F_inverse(y), 0.0);
}

double EquilibriumSolution::r(double t) const {
    check_time(t, "r");
    if (t == 0.0) return r0_;
    return r_from_phase(t);
}

double EquilibriumSolution::r_prime(double t) const {
    check_time(t, "r_prime");
    const double rt = r(t);
    const double onep = 1.0 + rt;
    return -kappa_ * onep * onep * onep / ((1.0 + 3.0 * rt) * std::sqrt(1.0 + 2.0 * rt));
}

double EquilibriumSolution::sigma1(double t) const {
    check_time(t, "sigma1");
    const double sa = params_.sigma_a;
    return sa * sa * shape_G(r(t)) / G_r0_;
}

double EquilibriumSolution::sigma2(double t) const {
    check_time(t, "sigma2");
    const double rt = r(t);
    return params_.rho * params_.sigma_a * params_.sigma_v * rt * std::sqrt(1.0 + 2.0 * rt) /
           (r0_ * std::sqrt(1.0 + 2.0 * r0_));
}

double EquilibriumSolution::sigma4(double t) const {
    return remaining_variance(t) +
           (1.0 - params_.rho * params_.rho) * params_.sigma_v * params_.sigma_v;
}

double EquilibriumSolution::remaining_variance(double t) const {
    check_time(t, "remaining_variance");
    const double rt = r(t);
    const double sv = params_.sigma_v;
    const double onep0 = 1.0 + r0_;
    const double onept = 1.0 + rt;
    return params_.rho * params_.rho * sv * sv * std::sqrt(1.0 + 2.0 * r0_) * onept * onept /
           (onep0 * onep0 * std::sqrt(1.0 + 2.0 * rt));
}

double EquilibriumSolution::lambda(double t) const {
    check_time(t, "lambda");
    const double rt = r(t);
    const double onep = 1.0 + rt;
    return 2.0 * I_ * onep * onep / (1.0 + 2.0 * rt);
}

double EquilibriumSolution::lambda_prime(double t) const {
    if (!std::isfinite(t) || t <= 0.0 || t >= params_.T)
        throw domain_error("lambda_prime: t must lie in (0, T)");
    const double rt = r(t);
    const double sa = params_.sigma_a, sw = params_.sigma_w, sv = params_.sigma_v;
    const double onep0 = 1.0 + r0_;
    const double onept = 1.0 + rt;
    const double pref = 2.0 * params_.rho * sw * sw * sv *
                        r0_ * r0_ * r0_ * std::pow(1.0 + 2.0 * r0_, 2.5) /
                        (sa * sa * sa * onep0 * onep0 * onep0 * onep0);
    return -pref * rt * onept * onept * onept * onept /
           ((1.0 + 3.0 * rt) * std::pow(1.0 + 2.0 * rt, 2.5));
}

double EquilibriumSolution::mu(double t) const {
    check_time(t, "mu");
    const double rt = r(t);
    const double sa = params_.sigma_a, sw = params_.sigma_w, sv = params_.sigma_v;
    const double onep0 = 1.0 + r0_;
    const double onept = 1.0 + rt;
    const double pref = params_.rho * sw * sw * sv *
                        r0_ * r0_ * r0_ * std::pow(1.0 + 2.0 * r0_, 2.5) /
                        (sa * sa * sa * onep0 * onep0 * onep0 * onep0);
    return -pref * onept * onept * onept * onept /
           ((1.0 + 3.0 * rt) * std::pow(1.0 + 2.0 * rt, 2.5));
}

double EquilibriumSolution::beta(double t) const {
    check_time(t, "beta");
    const double rt = r(t);
    if (t >= params_.T || rt <= 0.0)
        throw domain_error("beta: undefined at t = T (terminal trade is the block order)");
    const double onept = 1.0 + rt;
    return kappa_ * onept * onept / (rt * std::pow(1.0 + 2.0 * rt, 1.5));
}

double EquilibriumSolution::s(double t) const {
    check_time(t, "s");
    const double rt = r(t);
    const double onept = 1.0 + rt;
    return -kappa_ * onept * onept * onept / ((1.0 + 3.0 * rt) * std::pow(1.0 + 2.0 * rt, 1.5));
}

double EquilibriumSolution::alpha(double t) const {
    check_time(t, "alpha");
    const double rt = r(t);
    const double onept = 1.0 + rt;
    return kappa_ * onept * onept / ((1.0 + 3.0 * rt) * std::pow(1.0 + 2.0 * rt, 1.5));
}

double EquilibriumSolution::J(double t) const {
    check_time(t, "J");
    const double rt = r(t);
    return 2.0 * I_ * (1.0 + rt) / (1.0 + 2.0 * rt);
}

double EquilibriumSolution::K(double t) const {
    check_time(t, "K");
    if (t == params_.T) return 0.0;
    const double sw2 = params_.sigma_w * params_.sigma_w;
    auto integrand = [this, sw2](double u) {
        const double ru = r_from_phase(u);
        const double Ju = 2.0 * I_ * (1.0 + ru) / (1.0 + 2.0 * ru);
        return sw2 * (I_ - Ju) * ru * ru;
    };
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, t, params_.T, 10, 1e-10, &err);
}

Coefficients EquilibriumSolution::coefficients_at(double t) const {
    check_time(t, "coefficients_at");
    Coefficients c;
    c.lambda = lambda(t);
    c.mu = mu(t);
    c.s = s(t);
    c.alpha = alpha(t);
    c.J = J(t);
    if (t < params_.T && r(t) > 0.0) c.beta = beta(t);
    return c;
}

double EquilibriumSolution::f(double t) const {
    check_time(t, "f");
    const double rt = r(t);
    const double w = 1.0 + 2.0 * rt;
    const double onept = 1.0 + rt;
    return 1.0 - c1_ * w * std::sqrt(w) / onept + c2_ * w / onept;
}

double EquilibriumSolution::g(double t) const {
    check_time(t, "g");
    const double rt = r(t);
    const double w = 1.0 + 2.0 * rt;
    const double onept = 1.0 + rt;
    return (w / onept) * (c1_ * (1.0 + rt - rt * rt) / std::sqrt(w) - c2_);
}

double EquilibriumSolution::f_prime(double t) const {
    check_time(t, "f_prime");
    const double rt = r(t);
    const double onept = 1.0 + rt;
    const double drift = kappa_ * c1_ * onept * onept / (1.0 + 2.0 * rt);
    return drift + alpha(t) * g(t);
}

double EquilibriumSolution::block_fraction() const {
    return (std::sqrt(1.0 + 2.0 * r0_) - 1.0 + r0_ * (r0_ - 1.0)) / (r0_ * (1.0 + 2.0 * r0_));
}

double EquilibriumSolution::scaled_autocorrelation(double t, double sigma3) const {
    if (!std::isfinite(t) || t <= 0.0 || t >= params_.T)
        throw domain_error("scaled_autocorrelation: t must lie in (0, T)");
    if (!std::isfinite(sigma3) || sigma3 < 0.0)
        throw domain_error("scaled_autocorrelation: sigma3 must be >= 0");
    const double a = alpha(t);
    const double sw2 = params_.sigma_w * params_.sigma_w;
    return a * (a * sigma3 / sw2 + r(t));
}

double EquilibriumSolution::beta_sq_sigma1(double t) const {
    check_time(t, "beta_sq_sigma1");
    const double rt = r(t);
    const double onept = 1.0 + rt;
    return params_.sigma_w * params_.sigma_w * kappa_ * onept * onept /
           std::pow(1.0 + 2.0 * rt, 1.5);
}

}  // namespace kyleq
