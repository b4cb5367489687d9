#include "kyleq/kernels.hpp"

#include <atomic>
#include <optional>

#include "kyleq/model.hpp"

namespace kyleq {
namespace kernels {

namespace {

std::atomic<int> g_forced{-1};  // -1 = auto

Backend detect() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
    return Backend::scalar;
}

}  // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "?";
}

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend active_backend() {
    const int forced = g_forced.load(std::memory_order_relaxed);
    if (forced >= 0) return static_cast<Backend>(forced);
    static const Backend detected = detect();
    return detected;
}

void set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_supported())
        throw domain_error("kernels: avx2 backend not supported on this host");
    g_forced.store(static_cast<int>(b), std::memory_order_relaxed);
}

void reset_backend() { g_forced.store(-1, std::memory_order_relaxed); }

void normal_pairs(const double* u1, const double* u2, double* z0, double* z1, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::avx2) {
        normal_pairs_avx2(u1, u2, z0, z1, n);
        return;
    }
#endif
    normal_pairs_scalar(u1, u2, z0, z1, n);
}

void step_paths(const StepCoeffs& c, std::size_t n, const double* a, const double* z,
                double* theta, double* q, double* p, double* y, double* value) {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::avx2) {
        step_paths_avx2(c, n, a, z, theta, q, p, y, value);
        return;
    }
#endif
    step_paths_scalar(c, n, a, z, theta, q, p, y, value);
}

}  // namespace kernels
}  // namespace kyleq
