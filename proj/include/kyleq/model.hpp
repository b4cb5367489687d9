#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace kyleq {

// Error hierarchy. Everything the library throws derives from kyleq::error
// so the CLI can map failures onto its exit-code contract.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument to a pure evaluator (x < 0, t outside [0,T], ...).
class domain_error : public error {
public:
    using error::error;
};

// Root bracketing / polishing could not meet the residual target.
class calibration_error : public error {
public:
    using error::error;
};

// An ODE integration produced a non-finite or sign-violating state.
class ode_error : public error {
public:
    using error::error;
};

/// Exogenous model inputs: noise-trader volatility sigma_w, target standard
/// deviation sigma_a, dividend standard deviation sigma_v, target-dividend
/// correlation rho in (0,1], and the trading horizon T.
struct ModelParams {
    double sigma_w;
    double sigma_a;
    double sigma_v;
    double rho;
    double T;

    ModelParams(double sigma_w_, double sigma_a_, double sigma_v_, double rho_, double T_)
        : sigma_w(sigma_w_), sigma_a(sigma_a_), sigma_v(sigma_v_), rho(rho_), T(T_) {
        validate();
    }

    void validate() const {
        require(std::isfinite(sigma_w) && sigma_w > 0.0, "sigma_w must be finite and > 0");
        require(std::isfinite(sigma_a) && sigma_a > 0.0, "sigma_a must be finite and > 0");
        require(std::isfinite(sigma_v) && sigma_v > 0.0, "sigma_v must be finite and > 0");
        require(std::isfinite(rho) && rho > 0.0 && rho <= 1.0, "rho must be in (0, 1]");
        require(std::isfinite(T) && T > 0.0, "T must be finite and > 0");
    }

private:
    static void require(bool ok, const char* what) {
        if (!ok) throw domain_error(std::string("ModelParams: ") + what);
    }
};

}  // namespace kyleq
