#include <bit>
#include <cmath>
#include <cstdint>

#include "kernels_impl.hpp"

namespace kyleq {
namespace kernels {

namespace {

// Scalar lane: one double, mask is bool.
struct Lane1 {
    double v;
    using mask = bool;

    static Lane1 splat(double x) { return {x}; }
    static Lane1 load(const double* p) { return {*p}; }
    void store(double* p) const { *p = v; }

    friend Lane1 operator+(Lane1 a, Lane1 b) { return {a.v + b.v}; }
    friend Lane1 operator-(Lane1 a, Lane1 b) { return {a.v - b.v}; }
    friend Lane1 operator*(Lane1 a, Lane1 b) { return {a.v * b.v}; }
    friend Lane1 operator/(Lane1 a, Lane1 b) { return {a.v / b.v}; }
};

inline Lane1 neg(Lane1 a) { return {-a.v}; }
inline Lane1 sqrt_lanes(Lane1 a) { return {std::sqrt(a.v)}; }
inline Lane1 round_nearest_lanes(Lane1 a) { return {std::nearbyint(a.v)}; }
inline bool cmp_lt(Lane1 a, Lane1 b) { return a.v < b.v; }
inline bool cmp_eq(Lane1 a, Lane1 b) { return a.v == b.v; }
inline Lane1 select(bool m, Lane1 a, Lane1 b) { return m ? a : b; }

inline void split_exponent(Lane1 u, Lane1& m, Lane1& e) {
    const uint64_t bits = std::bit_cast<uint64_t>(u.v);
    const int64_t raw = static_cast<int64_t>(bits >> 52);
    e.v = static_cast<double>(raw) - 1022.0;
    m.v = std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFull) | 0x3FE0000000000000ull);
}

}  // namespace

void normal_pairs_scalar(const double* u1, const double* u2, double* z0, double* z1,
                         std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        detail::normal_pairs_lane<Lane1>(u1 + i, u2 + i, z0 + i, z1 + i);
}

void step_paths_scalar(const StepCoeffs& c, std::size_t n, const double* a, const double* z,
                       double* theta, double* q, double* p, double* y, double* value) {
    for (std::size_t i = 0; i < n; ++i)
        detail::step_paths_lane<Lane1>(c, a + i, z + i, theta + i, q + i, p + i, y + i,
                                       value + i);
}

}  // namespace kernels
}  // namespace kyleq
