// NEON kernels; compiled on AArch64 only, where NEON is baseline.

#include "abem/simd/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace abem::simd {
namespace {

inline uint32x4_t mix32x4(uint32x4_t x) noexcept {
    x = veorq_u32(x, vshrq_n_u32(x, 16));
    x = vmulq_u32(x, vdupq_n_u32(0x7FEB352Du));
    x = veorq_u32(x, vshrq_n_u32(x, 15));
    x = vmulq_u32(x, vdupq_n_u32(0x846CA68Bu));
    return veorq_u32(x, vshrq_n_u32(x, 16));
}

std::uint64_t live_mask_neon(std::uint64_t key, std::uint32_t world_base,
                             std::uint32_t threshold) noexcept {
    const uint32x4_t lo = vdupq_n_u32(static_cast<std::uint32_t>(key));
    const uint32x4_t hi = vdupq_n_u32(static_cast<std::uint32_t>(key >> 32));
    const uint32x4_t thr = vdupq_n_u32(threshold);
    static constexpr std::uint32_t kOffsets[4] = {0, 1, 2, 3};
    static constexpr std::uint32_t kBits[4] = {1, 2, 4, 8};
    const uint32x4_t bits = vld1q_u32(kBits);
    uint32x4_t world = vaddq_u32(vdupq_n_u32(world_base), vld1q_u32(kOffsets));
    const uint32x4_t step = vdupq_n_u32(4);
    std::uint64_t mask = 0;
    for (int block = 0; block < 16; ++block) {
        uint32x4_t h = mix32x4(veorq_u32(world, lo));
        h = mix32x4(vaddq_u32(h, hi));
        const uint32x4_t lt = vcltq_u32(h, thr);
        const std::uint64_t nibble = vaddvq_u32(vandq_u32(lt, bits));
        mask |= nibble << (4 * block);
        world = vaddq_u32(world, step);
    }
    return mask;
}

void accumulate_lane_counts_neon(const std::uint64_t* masks, std::size_t count,
                                 std::uint32_t* counts) noexcept {
    static constexpr std::uint32_t kBits[4] = {1, 2, 4, 8};
    const uint32x4_t bits = vld1q_u32(kBits);
    uint32x4_t acc[16];
    for (int b = 0; b < 16; ++b) acc[b] = vld1q_u32(counts + 4 * b);
    for (std::size_t i = 0; i < count; ++i) {
        const auto m = masks[i];
        if (m == 0) continue;
        for (int b = 0; b < 16; ++b) {
            const uint32x4_t nibble = vdupq_n_u32(static_cast<std::uint32_t>((m >> (4 * b)) & 0xF));
            acc[b] = vsubq_u32(acc[b], vtstq_u32(nibble, bits));
        }
    }
    for (int b = 0; b < 16; ++b) vst1q_u32(counts + 4 * b, acc[b]);
}

constexpr KernelTable kNeon{Isa::Neon, &live_mask_neon, &accumulate_lane_counts_neon};

}  // namespace

namespace detail {
const KernelTable& neon_table() noexcept { return kNeon; }
}  // namespace detail

}  // namespace abem::simd

#endif
