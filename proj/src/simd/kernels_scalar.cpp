#include <bit>
#include <cmath>

#include "abem/simd/kernels.hpp"

namespace abem::simd {
namespace {

// lowbias32 (Wellons); bijective on 32-bit words.
constexpr std::uint32_t mix32(std::uint32_t x) noexcept {
    x ^= x >> 16;
    x *= 0x7FEB352Du;
    x ^= x >> 15;
    x *= 0x846CA68Bu;
    x ^= x >> 16;
    return x;
}

std::uint64_t live_mask_scalar(std::uint64_t key, std::uint32_t world_base,
                               std::uint32_t threshold) noexcept {
    std::uint64_t mask = 0;
    for (std::uint32_t lane = 0; lane < kLanes; ++lane) {
        if (lane_hash(key, world_base + lane) < threshold) mask |= std::uint64_t{1} << lane;
    }
    return mask;
}

void accumulate_lane_counts_scalar(const std::uint64_t* masks, std::size_t count,
                                   std::uint32_t* counts) noexcept {
    for (std::size_t i = 0; i < count; ++i) {
        for (auto m = masks[i]; m != 0; m &= m - 1) ++counts[std::countr_zero(m)];
    }
}

constexpr KernelTable kScalar{Isa::Scalar, &live_mask_scalar, &accumulate_lane_counts_scalar};

}  // namespace

CoinThreshold make_threshold(double p) noexcept {
    if (!(p > 0.0)) return {0, false};
    if (p >= 1.0) return {0, true};
    const double scaled = std::floor(p * 4294967296.0);
    return {static_cast<std::uint32_t>(scaled), false};
}

std::uint64_t arc_key(std::uint64_t world_seed, std::uint32_t arc) noexcept {
    std::uint64_t x = world_seed + 0x9E3779B97F4A7C15ull * (std::uint64_t{arc} + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint32_t lane_hash(std::uint64_t key, std::uint32_t world) noexcept {
    const auto lo = static_cast<std::uint32_t>(key);
    const auto hi = static_cast<std::uint32_t>(key >> 32);
    return mix32(mix32(world ^ lo) + hi);
}

namespace detail {
const KernelTable& scalar_table() noexcept { return kScalar; }
}  // namespace detail

}  // namespace abem::simd
