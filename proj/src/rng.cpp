#include "kyleq/rng.hpp"

namespace kyleq {
namespace rng {

namespace {

constexpr uint32_t kMult0 = 0xD2511F53u;
constexpr uint32_t kMult1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<uint32_t, 4>& x, uint32_t k0, uint32_t k1) {
    const uint64_t p0 = static_cast<uint64_t>(kMult0) * x[0];
    const uint64_t p1 = static_cast<uint64_t>(kMult1) * x[2];
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
    x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
}

}  // namespace

std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key) {
    std::array<uint32_t, 4> x = counter;
    uint32_t k0 = key[0], k1 = key[1];
    for (int r = 0; r < 10; ++r) {
        round_once(x, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return x;
}

void fill_uniform_pairs(uint64_t seed, uint64_t path0, std::size_t n, uint64_t pair_index,
                        double* u1, double* u2) {
    const std::array<uint32_t, 2> key{static_cast<uint32_t>(seed),
                                      static_cast<uint32_t>(seed >> 32)};
    constexpr double kScale = 0x1.0p-53;
    for (std::size_t i = 0; i < n; ++i) {
        const uint64_t path = path0 + i;
        const std::array<uint32_t, 4> ctr{
            static_cast<uint32_t>(path), static_cast<uint32_t>(path >> 32),
            static_cast<uint32_t>(pair_index), static_cast<uint32_t>(pair_index >> 32)};
        const auto out = philox4x32(ctr, key);
        const uint64_t b1 = (static_cast<uint64_t>(out[0]) << 32) | out[1];
        const uint64_t b2 = (static_cast<uint64_t>(out[2]) << 32) | out[3];
        u1[i] = static_cast<double>((b1 >> 11) + 1) * kScale;  // (0, 1]
        u2[i] = static_cast<double>(b2 >> 11) * kScale;        // [0, 1)
    }
}

}  // namespace rng
}  // namespace kyleq
