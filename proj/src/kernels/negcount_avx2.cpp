// SPDX-License-Identifier: Apache-2.0
// Compiled with -mavx2; selected at runtime behind a cpuid check.
#if defined(__x86_64__)

#include <immintrin.h>

#include "andlab/kernels/negcount.hpp"

namespace andlab::kernels {

void negcount_batch4_avx2(const int* parent, const double* diag4, int n, const double shift4[4],
                          NegcountResult out[4]) {
    std::vector<double> acc(static_cast<std::size_t>(4 * n), 0.0);
    const __m256d shift = _mm256_loadu_pd(shift4);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    __m256i neg = _mm256_setzero_si256();
    int bad_mask = 0;

    for (int v = n - 1; v >= 0; --v) {
        const __m256d a = _mm256_loadu_pd(&acc[static_cast<std::size_t>(4 * v)]);
        const __m256d dg = _mm256_loadu_pd(&diag4[4 * v]);
        const __m256d d = _mm256_sub_pd(_mm256_sub_pd(dg, shift), a);

        // breakdown: d == 0 or non-finite (d != d catches NaN, |d| == inf)
        const __m256d is_zero = _mm256_cmp_pd(d, zero, _CMP_EQ_OQ);
        const __m256d is_nan = _mm256_cmp_pd(d, d, _CMP_UNORD_Q);
        const __m256d absd =
            _mm256_andnot_pd(_mm256_set1_pd(-0.0), d);
        const __m256d is_inf = _mm256_cmp_pd(absd, _mm256_set1_pd(__builtin_inf()), _CMP_EQ_OQ);
        bad_mask |= _mm256_movemask_pd(_mm256_or_pd(is_zero, _mm256_or_pd(is_nan, is_inf)));

        const __m256d is_neg = _mm256_cmp_pd(d, zero, _CMP_LT_OQ);
        neg = _mm256_sub_epi64(neg, _mm256_castpd_si256(is_neg));  // mask is all-ones = -1

        const int p = parent[v];
        if (p >= 0) {
            const __m256d pa = _mm256_loadu_pd(&acc[static_cast<std::size_t>(4 * p)]);
            _mm256_storeu_pd(&acc[static_cast<std::size_t>(4 * p)],
                             _mm256_add_pd(pa, _mm256_div_pd(one, d)));
        }
    }

    alignas(32) long long counts[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(counts), neg);
    for (int lane = 0; lane < 4; ++lane) {
        out[lane].count = static_cast<int>(counts[lane]);
        out[lane].breakdown = (bad_mask >> lane) & 1;
    }
}

}  // namespace andlab::kernels

#endif  // __x86_64__
