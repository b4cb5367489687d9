#pragma once

#include <cstddef>
#include <cstdint>

namespace kyleq {
namespace kernels {

// The two data-parallel inner loops of the Monte Carlo engine, as scalar
// reference kernels plus an AVX2 variant selected at runtime.  Both variants
// run the same IEEE operation sequence (no FMA contraction), so their results
// are bit-identical; the equivalence tests assert exactly that.

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool avx2_supported();

/// Backend in effect (auto-detected unless overridden).
Backend active_backend();
/// Pin a backend; throws kyleq::domain_error if it is unavailable.
void set_backend(Backend b);
/// Return to auto-detection.
void reset_backend();

/// Per-step coefficients shared by every path: the pricing rule (lambda, mu,
/// r, s), the strategy (beta, alpha), the step size, and sigma_w*sqrt(dt).
struct StepCoeffs {
    double dt;
    double sw_sdt;
    double beta;
    double alpha;
    double r;
    double s;
    double lambda;
    double mu;
};

/// Map uniforms to a standard-normal pair per lane:
/// z0 = sqrt(-2 ln u1) cos(2 pi u2), z1 = sqrt(-2 ln u1) sin(2 pi u2).
/// u1 must lie in (0, 1], u2 in [0, 1).  Uses internal polynomial log/sincos
/// (no libm), identical in every backend.
void normal_pairs(const double* u1, const double* u2, double* z0, double* z1, std::size_t n);

/// One explicit Euler-Maruyama step over a block of paths, left-endpoint
/// coefficients.  Updates theta, q, p, y in place and accumulates the insider
/// value integrand (a - theta) * dP into value.  z holds the standard-normal
/// draws for this step.
void step_paths(const StepCoeffs& c, std::size_t n, const double* a, const double* z,
                double* theta, double* q, double* p, double* y, double* value);

// Direct single-backend entry points (equivalence tests compare these).
void normal_pairs_scalar(const double* u1, const double* u2, double* z0, double* z1,
                         std::size_t n);
void step_paths_scalar(const StepCoeffs& c, std::size_t n, const double* a, const double* z,
                       double* theta, double* q, double* p, double* y, double* value);
void normal_pairs_avx2(const double* u1, const double* u2, double* z0, double* z1,
                       std::size_t n);
void step_paths_avx2(const StepCoeffs& c, std::size_t n, const double* a, const double* z,
                     double* theta, double* q, double* p, double* y, double* value);

}  // namespace kernels
}  // namespace kyleq
