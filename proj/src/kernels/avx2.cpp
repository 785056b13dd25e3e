// Compiled with -mavx2 when the toolchain targets x86-64; the dispatcher
// only routes here after a CPUID check.

#include "symerg/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

#include <algorithm>
#include <bit>

namespace symerg::kernels::avx2 {

#if defined(__AVX2__)

std::size_t count_equal(WordView w, Letter a) {
    const Letter* p = w.data();
    const std::size_t n = w.size();
    const __m256i needle = _mm256_set1_epi16(static_cast<short>(a));
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        auto mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi16(v, needle)));
        total += static_cast<std::size_t>(std::popcount(mask)) / 2;
    }
    for (; i < n; ++i) total += p[i] == a;
    return total;
}

std::size_t count_not_equal(WordView w, Letter a) { return w.size() - count_equal(w, a); }

void find_occurrences(WordView host, WordView pattern, std::vector<std::size_t>& out) {
    out.clear();
    const std::size_t m = pattern.size();
    if (m == 0 || m > host.size()) return;
    const std::size_t last = host.size() - m;  // inclusive
    const Letter* h = host.data();
    // Candidate filter on the first and last pattern letters, then verify.
    const __m256i first = _mm256_set1_epi16(static_cast<short>(pattern[0]));
    const __m256i lastc = _mm256_set1_epi16(static_cast<short>(pattern[m - 1]));
    std::size_t i = 0;
    for (; i + 16 <= last + 1; i += 16) {
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(h + i));
        __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(h + i + m - 1));
        __m256i eq = _mm256_and_si256(_mm256_cmpeq_epi16(a, first), _mm256_cmpeq_epi16(b, lastc));
        auto mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(eq));
        while (mask != 0) {
            const unsigned bit = static_cast<unsigned>(std::countr_zero(mask));
            const std::size_t pos = i + bit / 2;
            if (std::equal(pattern.begin() + 1, pattern.end(), h + pos + 1)) out.push_back(pos);
            mask &= ~(3u << bit);
        }
    }
    for (; i <= last; ++i) {
        if (std::equal(pattern.begin(), pattern.end(), h + i)) out.push_back(i);
    }
}

std::int64_t birkhoff_max_violation(const BirkhoffWindowScan& s) {
    const std::int32_t* kp = s.k_prefix.data();
    const std::int32_t* ap = s.a_prefix.data();
    const __m256d cden = _mm256_set1_pd(static_cast<double>(s.c_den));
    const __m256d cnum = _mm256_set1_pd(static_cast<double>(s.c_num));
    const __m256d eden = _mm256_set1_pd(static_cast<double>(s.e_den));
    const __m256d rhs_scale = _mm256_set1_pd(static_cast<double>(s.e_num) * static_cast<double>(s.c_den));
    const __m256d zero = _mm256_setzero_pd();
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d best = zero;

    std::int64_t n = 1;
    for (; n + 3 <= s.n_max; n += 4) {
        const std::int64_t fwd = s.p + n;
        const std::int64_t bwd = s.p - n - 3;
        __m128i kf = _mm_loadu_si128(reinterpret_cast<const __m128i*>(kp + fwd));
        __m128i kb = _mm_shuffle_epi32(_mm_loadu_si128(reinterpret_cast<const __m128i*>(kp + bwd)),
                                       _MM_SHUFFLE(0, 1, 2, 3));
        __m128i af = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ap + fwd));
        __m128i ab = _mm_shuffle_epi32(_mm_loadu_si128(reinterpret_cast<const __m128i*>(ap + bwd)),
                                       _MM_SHUFFLE(0, 1, 2, 3));
        __m256d sk = _mm256_cvtepi32_pd(_mm_sub_epi32(kf, kb));
        __m256d sa = _mm256_cvtepi32_pd(_mm_sub_epi32(af, ab));
        __m256d diff = _mm256_sub_pd(_mm256_mul_pd(sa, cden), _mm256_mul_pd(cnum, sk));
        __m256d lhs = _mm256_mul_pd(_mm256_andnot_pd(sign, diff), eden);
        __m256d rhs = _mm256_mul_pd(rhs_scale, sk);
        __m256d viol = _mm256_and_pd(_mm256_cmp_pd(lhs, rhs, _CMP_GE_OQ), _mm256_cmp_pd(sk, zero, _CMP_GT_OQ));
        best = _mm256_max_pd(best, _mm256_and_pd(viol, sk));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    auto result = static_cast<std::int64_t>(std::max({lanes[0], lanes[1], lanes[2], lanes[3]}));
    if (n <= s.n_max) {
        for (; n <= s.n_max; ++n) {
            const std::int64_t sk = kp[s.p + n] - kp[s.p - n];
            if (sk <= 0) continue;
            const std::int64_t sa = ap[s.p + n] - ap[s.p - n];
            __int128 diff = static_cast<__int128>(sa) * s.c_den - static_cast<__int128>(s.c_num) * sk;
            if (diff < 0) diff = -diff;
            if (diff * s.e_den >= static_cast<__int128>(s.e_num) * s.c_den * sk) result = std::max(result, sk);
        }
    }
    return result;
}

#else  // no AVX2 in this build: route to the reference code

std::size_t count_equal(WordView w, Letter a) { return scalar::count_equal(w, a); }
std::size_t count_not_equal(WordView w, Letter a) { return scalar::count_not_equal(w, a); }
void find_occurrences(WordView host, WordView pattern, std::vector<std::size_t>& out) {
    scalar::find_occurrences(host, pattern, out);
}
std::int64_t birkhoff_max_violation(const BirkhoffWindowScan& s) { return scalar::birkhoff_max_violation(s); }

#endif

}  // namespace symerg::kernels::avx2
