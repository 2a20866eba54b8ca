#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace blpack::kernels {

// Structure-of-arrays view of placed boxes on the integer lattice,
// sorted by ascending left face.
struct BoxSoA {
    const std::int64_t* lf = nullptr;
    const std::int64_t* rf = nullptr;
    const std::int64_t* bf = nullptr;
    const std::int64_t* tf = nullptr;
    std::size_t n = 0;
};

inline constexpr std::int64_t kNoGap = -1;

// Leftmost x in [0, width - w] such that [x, x+w] x [lo, hi] meets no box
// interior, or kNoGap. Boxes blocking the band are those with bf < hi and tf > lo.
using GapFn = std::int64_t (*)(const BoxSoA&, std::int64_t lo, std::int64_t hi, std::int64_t w, std::int64_t width);

std::int64_t leftmost_gap_scalar(const BoxSoA& boxes, std::int64_t lo, std::int64_t hi, std::int64_t w, std::int64_t width);
#if defined(__x86_64__) || defined(__i386__)
std::int64_t leftmost_gap_avx2(const BoxSoA& boxes, std::int64_t lo, std::int64_t hi, std::int64_t w, std::int64_t width);
#endif
#if defined(__aarch64__)
std::int64_t leftmost_gap_neon(const BoxSoA& boxes, std::int64_t lo, std::int64_t hi, std::int64_t w, std::int64_t width);
#endif

// Chosen once per process from CPU features; BLPACK_SIMD=scalar forces the reference path.
GapFn leftmost_gap();
std::string_view active_name();
bool avx2_available();

}  // namespace blpack::kernels
