#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace kyleq {
namespace rng {

// Counter-based generator: each (seed, path, pair) triple maps to one 128-bit
// block independent of evaluation order, so path streams are reproducible and
// embarrassingly parallel.

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key);

/// Pair index reserved for the per-path primitive draws (target, dividend).
inline constexpr uint64_t kPrimitivesPair = UINT64_MAX;

/// Fill u1 in (0, 1] and u2 in [0, 1) for paths path0..path0+n-1 at a given
/// pair index.  u1 is safe to pass to log; both carry 53 uniform bits.
void fill_uniform_pairs(uint64_t seed, uint64_t path0, std::size_t n, uint64_t pair_index,
                        double* u1, double* u2);

}  // namespace rng
}  // namespace kyleq
