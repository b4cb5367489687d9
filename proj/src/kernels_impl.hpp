#pragma once

// Shared kernel algorithms, templated over a lane type V (plain double for
// the scalar reference, a __m256d wrapper for AVX2).  Every floating-point
// operation here must map to one IEEE-754 add/sub/mul/div/sqrt or an exact
// bit manipulation so the backends agree bit-for-bit.  These translation
// units are compiled with -ffp-contract=off for the same reason.
//
// A lane type V provides:
//   V::splat(double), V::load(const double*), v.store(double*)
//   operators + - * /, neg(v)
//   sqrt_lanes(v), round_nearest_lanes(v)
//   mask type V::mask, cmp_lt(a,b), cmp_eq(a,b), select(mask, a, b)
//   split_exponent(u, m, e): u = m * 2^e with m in [0.5, 1), e integral

#include "kyleq/kernels.hpp"

namespace kyleq {
namespace kernels {
namespace detail {

inline constexpr double kSqrtHalf = 0.70710678118654752440;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kTwoOverPi = 6.36619772367581343076e-01;
inline constexpr double kPiOver2Hi = 1.57079632673412561417e+00;
inline constexpr double kPiOver2Lo = 6.07710050650619224932e-11;
inline constexpr double kTwoPi = 6.28318530717958647693e+00;

/// ln u for u in (0, 1]: reduce to m in [sqrt(1/2), sqrt(2)) and evaluate the
/// atanh series of ln m in s = (m-1)/(m+1).
template <class V>
inline V log_unit(V u) {
    const V one = V::splat(1.0);
    V m, e;
    split_exponent(u, m, e);
    const auto low = cmp_lt(m, V::splat(kSqrtHalf));
    m = select(low, m + m, m);
    e = e - select(low, one, V::splat(0.0));

    const V s = (m - one) / (m + one);
    const V w = s * s;
    V p = V::splat(1.0 / 23.0);
    p = p * w + V::splat(1.0 / 21.0);
    p = p * w + V::splat(1.0 / 19.0);
    p = p * w + V::splat(1.0 / 17.0);
    p = p * w + V::splat(1.0 / 15.0);
    p = p * w + V::splat(1.0 / 13.0);
    p = p * w + V::splat(1.0 / 11.0);
    p = p * w + V::splat(1.0 / 9.0);
    p = p * w + V::splat(1.0 / 7.0);
    p = p * w + V::splat(1.0 / 5.0);
    p = p * w + V::splat(1.0 / 3.0);
    const V s2 = s + s;
    const V lnm = s2 + s2 * (w * p);
    return e * V::splat(kLn2Hi) + (e * V::splat(kLn2Lo) + lnm);
}

/// sin and cos of x in [0, 2*pi]: quadrant reduction with a two-part pi/2,
/// then Taylor polynomials on [-pi/4, pi/4].
template <class V>
inline void sincos_circle(V x, V& sin_out, V& cos_out) {
    V j = round_nearest_lanes(x * V::splat(kTwoOverPi));  // 0..4
    const V y = (x - j * V::splat(kPiOver2Hi)) - j * V::splat(kPiOver2Lo);
    const V z = y * y;

    V ps = V::splat(-7.64716373181981647590e-13);  // -1/15!
    ps = ps * z + V::splat(1.60590438368216145994e-10);   // 1/13!
    ps = ps * z + V::splat(-2.50521083854417187751e-08);  // -1/11!
    ps = ps * z + V::splat(2.75573192239858906526e-06);   // 1/9!
    ps = ps * z + V::splat(-1.98412698412698412526e-04);  // -1/7!
    ps = ps * z + V::splat(8.33333333333333333333e-03);   // 1/5!
    ps = ps * z + V::splat(-1.66666666666666666667e-01);  // -1/3!
    const V sn = y + y * (z * ps);

    V pc = V::splat(4.77947733238738529744e-14);          // 1/16!
    pc = pc * z + V::splat(-1.14707455977297247139e-11);  // -1/14!
    pc = pc * z + V::splat(2.08767569878680989792e-09);   // 1/12!
    pc = pc * z + V::splat(-2.75573192239858906526e-07);  // -1/10!
    pc = pc * z + V::splat(2.48015873015873015873e-05);   // 1/8!
    pc = pc * z + V::splat(-1.38888888888888888889e-03);  // -1/6!
    pc = pc * z + V::splat(4.16666666666666666667e-02);   // 1/4!
    const V cs = (V::splat(1.0) - V::splat(0.5) * z) + (z * z) * pc;

    j = select(cmp_eq(j, V::splat(4.0)), V::splat(0.0), j);
    const auto q1 = cmp_eq(j, V::splat(1.0));
    const auto q2 = cmp_eq(j, V::splat(2.0));
    const auto q3 = cmp_eq(j, V::splat(3.0));
    sin_out = select(q1, cs, select(q2, neg(sn), select(q3, neg(cs), sn)));
    cos_out = select(q1, neg(sn), select(q2, neg(cs), select(q3, sn, cs)));
}

template <class V>
inline void normal_pairs_lane(const double* u1, const double* u2, double* z0, double* z1) {
    const V lu = log_unit(V::load(u1));
    const V radius = sqrt_lanes(V::splat(-2.0) * lu);
    V sn, cs;
    sincos_circle(V::load(u2) * V::splat(kTwoPi), sn, cs);
    (radius * cs).store(z0);
    (radius * sn).store(z1);
}

template <class V>
inline void step_paths_lane(const StepCoeffs& c, const double* a, const double* z,
                            double* theta, double* q, double* p, double* y, double* value) {
    const V dt = V::splat(c.dt);
    const V av = V::load(a);
    const V th = V::load(theta);
    const V qv = V::load(q);

    const V gap = av - th;                                        // a - theta
    const V x = gap - qv;                                         // a - theta - q
    const V thdot = V::splat(c.beta) * x + V::splat(c.alpha) * qv;
    const V dy = thdot * dt + V::splat(c.sw_sdt) * V::load(z);
    const V qdt = qv * dt;
    const V dp = V::splat(c.lambda) * dy + V::splat(c.mu) * qdt;
    const V dq = V::splat(c.r) * dy + V::splat(c.s) * qdt;

    (V::load(value) + gap * dp).store(value);
    (th + thdot * dt).store(theta);
    (qv + dq).store(q);
    (V::load(p) + dp).store(p);
    (V::load(y) + dy).store(y);
}

}  // namespace detail
}  // namespace kernels
}  // namespace kyleq
