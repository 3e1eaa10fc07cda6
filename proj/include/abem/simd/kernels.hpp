#pragma once

// Data-parallel kernels behind the bit-parallel cascade simulator.
//
// The simulator runs 64 Monte-Carlo worlds at once: every node carries a
// 64-bit mask of the worlds in which it is active. Whether arc `a` is live in
// world `w` is a pure function of (world seed, a, w):
//
//     key   = arc_key(world_seed, a)
//     live  = lane_hash(key, w) < threshold
//
// so every implementation below must produce bit-identical masks. The scalar
// versions are the reference; the AVX2 and NEON versions are selected at
// runtime and tested for exact equality against it.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace abem::simd {

inline constexpr std::size_t kLanes = 64;

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

/// Coin threshold for activation probability p. `always` is set for p >= 1,
/// where no 32-bit threshold can express certainty.
struct CoinThreshold {
    std::uint32_t value = 0;
    bool always = false;
};
CoinThreshold make_threshold(double p) noexcept;

/// Per-arc key of the coin stream.
std::uint64_t arc_key(std::uint64_t world_seed, std::uint32_t arc) noexcept;

/// Reference lane hash; bit `lane` of live_mask(key, base, t) equals
/// lane_hash(key, base + lane) < t.
std::uint32_t lane_hash(std::uint64_t key, std::uint32_t world) noexcept;

struct KernelTable {
    Isa isa;
    /// Live-coin bits for worlds world_base .. world_base + 63.
    std::uint64_t (*live_mask)(std::uint64_t key, std::uint32_t world_base,
                               std::uint32_t threshold) noexcept;
    /// counts[j] += number of masks with bit j set, for j < 64.
    void (*accumulate_lane_counts)(const std::uint64_t* masks, std::size_t count,
                                   std::uint32_t* counts) noexcept;
};

bool isa_supported(Isa isa) noexcept;

/// Kernel set for a specific ISA. Throws abem::InvalidArgument when the CPU
/// (or this build) does not support it.
const KernelTable& kernels_for(Isa isa);

/// Currently active kernel set. Defaults to the best supported ISA; the
/// ABEM_SIMD environment variable ("scalar", "avx2", "neon") overrides.
const KernelTable& kernels() noexcept;
Isa active_isa() noexcept;
void set_active_isa(Isa isa);

namespace detail {
const KernelTable& scalar_table() noexcept;
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
const KernelTable& neon_table() noexcept;
#endif
}  // namespace detail

}  // namespace abem::simd
