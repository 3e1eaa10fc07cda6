// AVX2 kernels. Functions carry the target attribute instead of building the
// file with -mavx2, so nothing here leaks AVX2 code into shared inline symbols.

#include "abem/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)

#include <immintrin.h>

#define ABEM_AVX2 __attribute__((target("avx2")))

namespace abem::simd {
namespace {

ABEM_AVX2 inline __m256i mix32x8(__m256i x) noexcept {
    const __m256i m1 = _mm256_set1_epi32(0x7FEB352D);
    const __m256i m2 = _mm256_set1_epi32(static_cast<int>(0x846CA68Bu));
    x = _mm256_xor_si256(x, _mm256_srli_epi32(x, 16));
    x = _mm256_mullo_epi32(x, m1);
    x = _mm256_xor_si256(x, _mm256_srli_epi32(x, 15));
    x = _mm256_mullo_epi32(x, m2);
    return _mm256_xor_si256(x, _mm256_srli_epi32(x, 16));
}

ABEM_AVX2 std::uint64_t live_mask_avx2(std::uint64_t key, std::uint32_t world_base,
                                       std::uint32_t threshold) noexcept {
    const __m256i lo = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(key)));
    const __m256i hi = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(key >> 32)));
    // Unsigned compare via the signed one: flip the sign bit of both sides.
    const __m256i sign = _mm256_set1_epi32(static_cast<int>(0x80000000u));
    const __m256i thr = _mm256_xor_si256(_mm256_set1_epi32(static_cast<int>(threshold)), sign);
    const __m256i step = _mm256_set1_epi32(8);
    __m256i world = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(world_base)),
                                     _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7));
    std::uint64_t mask = 0;
    for (int block = 0; block < 8; ++block) {
        __m256i h = mix32x8(_mm256_xor_si256(world, lo));
        h = mix32x8(_mm256_add_epi32(h, hi));
        const __m256i lt = _mm256_cmpgt_epi32(thr, _mm256_xor_si256(h, sign));
        const auto bits = static_cast<std::uint32_t>(_mm256_movemask_ps(_mm256_castsi256_ps(lt)));
        mask |= std::uint64_t{bits} << (8 * block);
        world = _mm256_add_epi32(world, step);
    }
    return mask;
}

ABEM_AVX2 void accumulate_lane_counts_avx2(const std::uint64_t* masks, std::size_t count,
                                           std::uint32_t* counts) noexcept {
    const __m256i select = _mm256_setr_epi32(1, 2, 4, 8, 16, 32, 64, 128);
    __m256i acc[8];
    for (int b = 0; b < 8; ++b) {
        acc[b] = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(counts + 8 * b));
    }
    for (std::size_t i = 0; i < count; ++i) {
        const auto m = masks[i];
        if (m == 0) continue;
        for (int b = 0; b < 8; ++b) {
            const auto byte = static_cast<int>((m >> (8 * b)) & 0xFF);
            const __m256i v = _mm256_and_si256(_mm256_set1_epi32(byte), select);
            // Set lanes compare to all-ones (-1); subtracting adds one.
            acc[b] = _mm256_sub_epi32(acc[b], _mm256_cmpeq_epi32(v, select));
        }
    }
    for (int b = 0; b < 8; ++b) {
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(counts + 8 * b), acc[b]);
    }
}

constexpr KernelTable kAvx2{Isa::Avx2, &live_mask_avx2, &accumulate_lane_counts_avx2};

}  // namespace

namespace detail {
const KernelTable& avx2_table() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace abem::simd

#endif
