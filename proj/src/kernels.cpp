#include "blpack/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif
#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace blpack::kernels {

std::int64_t leftmost_gap_scalar(const BoxSoA& b, std::int64_t lo, std::int64_t hi, std::int64_t w, std::int64_t width) {
    std::int64_t cur = 0;
    for (std::size_t i = 0; i < b.n; ++i) {
        if (b.bf[i] < hi && b.tf[i] > lo) {
            if (b.lf[i] - cur >= w) return cur;
            cur = std::max(cur, b.rf[i]);
        }
    }
    return width - cur >= w ? cur : kNoGap;
}

#if defined(__x86_64__) || defined(__i386__)
__attribute__((target("avx2"))) std::int64_t leftmost_gap_avx2(const BoxSoA& b, std::int64_t lo, std::int64_t hi,
                                                                std::int64_t w, std::int64_t width) {
    std::int64_t cur = 0;
    const __m256i vhi = _mm256_set1_epi64x(hi);
    const __m256i vlo = _mm256_set1_epi64x(lo);
    std::size_t i = 0;
    for (; i + 4 <= b.n; i += 4) {
        __m256i bot = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.bf + i));
        __m256i top = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.tf + i));
        __m256i hit = _mm256_and_si256(_mm256_cmpgt_epi64(vhi, bot), _mm256_cmpgt_epi64(top, vlo));
        int mask = _mm256_movemask_pd(_mm256_castsi256_pd(hit));
        while (mask) {
            int j = __builtin_ctz(static_cast<unsigned>(mask));
            mask &= mask - 1;
            if (b.lf[i + j] - cur >= w) return cur;
            cur = std::max(cur, b.rf[i + j]);
        }
    }
    for (; i < b.n; ++i) {
        if (b.bf[i] < hi && b.tf[i] > lo) {
            if (b.lf[i] - cur >= w) return cur;
            cur = std::max(cur, b.rf[i]);
        }
    }
    return width - cur >= w ? cur : kNoGap;
}

bool avx2_available() { return __builtin_cpu_supports("avx2"); }
#else
bool avx2_available() { return false; }
#endif

#if defined(__aarch64__)
std::int64_t leftmost_gap_neon(const BoxSoA& b, std::int64_t lo, std::int64_t hi, std::int64_t w, std::int64_t width) {
    std::int64_t cur = 0;
    const int64x2_t vhi = vdupq_n_s64(hi);
    const int64x2_t vlo = vdupq_n_s64(lo);
    std::size_t i = 0;
    for (; i + 2 <= b.n; i += 2) {
        uint64x2_t hit = vandq_u64(vcgtq_s64(vhi, vld1q_s64(b.bf + i)), vcgtq_s64(vld1q_s64(b.tf + i), vlo));
        if ((vgetq_lane_u64(hit, 0) | vgetq_lane_u64(hit, 1)) == 0) continue;
        for (std::size_t j = 0; j < 2; ++j) {
            if ((j == 0 ? vgetq_lane_u64(hit, 0) : vgetq_lane_u64(hit, 1)) == 0) continue;
            if (b.lf[i + j] - cur >= w) return cur;
            cur = std::max(cur, b.rf[i + j]);
        }
    }
    for (; i < b.n; ++i) {
        if (b.bf[i] < hi && b.tf[i] > lo) {
            if (b.lf[i] - cur >= w) return cur;
            cur = std::max(cur, b.rf[i]);
        }
    }
    return width - cur >= w ? cur : kNoGap;
}
#endif

namespace {

struct Selection {
    GapFn fn;
    std::string_view name;
};

Selection select() {
    const char* env = std::getenv("BLPACK_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return {leftmost_gap_scalar, "scalar"};
#if defined(__x86_64__) || defined(__i386__)
    if (avx2_available()) return {leftmost_gap_avx2, "avx2"};
#endif
#if defined(__aarch64__)
    return {leftmost_gap_neon, "neon"};
#endif
    return {leftmost_gap_scalar, "scalar"};
}

const Selection& selection() {
    static const Selection s = select();
    return s;
}

}  // namespace

GapFn leftmost_gap() { return selection().fn; }
std::string_view active_name() { return selection().name; }

}  // namespace blpack::kernels
