#include <atomic>
#include <cstdlib>
#include <string>

#include "abem/error.hpp"
#include "abem/simd/kernels.hpp"

namespace abem::simd {
namespace {

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
constexpr bool kX86 = true;
#else
constexpr bool kX86 = false;
#endif

#if defined(__aarch64__)
constexpr bool kNeonBuilt = true;
#else
constexpr bool kNeonBuilt = false;
#endif

const KernelTable* table_or_null(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar:
            return &detail::scalar_table();
        case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
            return &detail::avx2_table();
#else
            return nullptr;
#endif
        case Isa::Neon:
#if defined(__aarch64__)
            return &detail::neon_table();
#else
            return nullptr;
#endif
    }
    return nullptr;
}

Isa initial_isa() noexcept {
    if (const char* env = std::getenv("ABEM_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return Isa::Scalar;
        if (want == "avx2" && isa_supported(Isa::Avx2)) return Isa::Avx2;
        if (want == "neon" && isa_supported(Isa::Neon)) return Isa::Neon;
    }
    if (isa_supported(Isa::Avx2)) return Isa::Avx2;
    if (isa_supported(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

std::atomic<const KernelTable*>& active_slot() noexcept {
    static std::atomic<const KernelTable*> slot{table_or_null(initial_isa())};
    return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar:
            return "scalar";
        case Isa::Avx2:
            return "avx2";
        case Isa::Neon:
            return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
            if constexpr (kX86) {
#if defined(__GNUC__) || defined(__clang__)
                return __builtin_cpu_supports("avx2");
#else
                return false;
#endif
            }
            return false;
        case Isa::Neon:
            return kNeonBuilt;
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) {
    const auto* t = table_or_null(isa);
    if (t == nullptr || !isa_supported(isa)) {
        throw InvalidArgument("SIMD kernel set not supported here: " + std::string(isa_name(isa)));
    }
    return *t;
}

const KernelTable& kernels() noexcept { return *active_slot().load(std::memory_order_acquire); }

Isa active_isa() noexcept { return kernels().isa; }

void set_active_isa(Isa isa) { active_slot().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace abem::simd
