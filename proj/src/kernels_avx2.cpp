#include "kernels_impl.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace kyleq {
namespace kernels {

namespace {

// Four doubles per lane group; mask is a full-width __m256d.
struct Lane4 {
    __m256d v;
    using mask = __m256d;

    static Lane4 splat(double x) { return {_mm256_set1_pd(x)}; }
    static Lane4 load(const double* p) { return {_mm256_loadu_pd(p)}; }
    void store(double* p) const { _mm256_storeu_pd(p, v); }

    friend Lane4 operator+(Lane4 a, Lane4 b) { return {_mm256_add_pd(a.v, b.v)}; }
    friend Lane4 operator-(Lane4 a, Lane4 b) { return {_mm256_sub_pd(a.v, b.v)}; }
    friend Lane4 operator*(Lane4 a, Lane4 b) { return {_mm256_mul_pd(a.v, b.v)}; }
    friend Lane4 operator/(Lane4 a, Lane4 b) { return {_mm256_div_pd(a.v, b.v)}; }
};

inline Lane4 neg(Lane4 a) {
    return {_mm256_xor_pd(a.v, _mm256_set1_pd(-0.0))};
}
inline Lane4 sqrt_lanes(Lane4 a) { return {_mm256_sqrt_pd(a.v)}; }
inline Lane4 round_nearest_lanes(Lane4 a) {
    return {_mm256_round_pd(a.v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC)};
}
inline __m256d cmp_lt(Lane4 a, Lane4 b) { return _mm256_cmp_pd(a.v, b.v, _CMP_LT_OQ); }
inline __m256d cmp_eq(Lane4 a, Lane4 b) { return _mm256_cmp_pd(a.v, b.v, _CMP_EQ_OQ); }
inline Lane4 select(__m256d m, Lane4 a, Lane4 b) { return {_mm256_blendv_pd(b.v, a.v, m)}; }

inline void split_exponent(Lane4 u, Lane4& m, Lane4& e) {
    const __m256i bits = _mm256_castpd_si256(u.v);
    // Raw exponent as a double via the 2^52 shift trick (values are small).
    const __m256i raw = _mm256_srli_epi64(bits, 52);
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);
    const __m256d rawd = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(raw, magic)),
                                       _mm256_castsi256_pd(magic));
    e.v = _mm256_sub_pd(rawd, _mm256_set1_pd(1022.0));
    const __m256i mant = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
        _mm256_set1_epi64x(0x3FE0000000000000ll));
    m.v = _mm256_castsi256_pd(mant);
}

}  // namespace

void normal_pairs_avx2(const double* u1, const double* u2, double* z0, double* z1,
                       std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        detail::normal_pairs_lane<Lane4>(u1 + i, u2 + i, z0 + i, z1 + i);
    if (i < n) normal_pairs_scalar(u1 + i, u2 + i, z0 + i, z1 + i, n - i);
}

void step_paths_avx2(const StepCoeffs& c, std::size_t n, const double* a, const double* z,
                     double* theta, double* q, double* p, double* y, double* value) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        detail::step_paths_lane<Lane4>(c, a + i, z + i, theta + i, q + i, p + i, y + i,
                                       value + i);
    if (i < n)
        step_paths_scalar(c, n - i, a + i, z + i, theta + i, q + i, p + i, y + i, value + i);
}

}  // namespace kernels
}  // namespace kyleq

#endif  // x86-64
