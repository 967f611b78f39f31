#if defined(__x86_64__)

#include <immintrin.h>

#include "ppflow/kernels.hpp"

namespace ppflow::kernels::avx2 {

void dot_basis_batch(const BasisRef& basis, const double* z, const double* x,
                     double* out, std::size_t n, bool multiply) {
    const int p = basis.degree;
    const double* d = basis.d;
    const double* sb = basis.sqrt_b;
    const __m256d shift = _mm256_set1_pd(basis.shift);
    const __m256d inv_scale = _mm256_set1_pd(basis.inv_scale);

    std::size_t m = 0;
    for (; m + 4 <= n; m += 4) {
        __m256d t = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + m), shift), inv_scale);
        __m256d prev = _mm256_setzero_pd();
        __m256d cur = _mm256_set1_pd(1.0);
        __m256d acc = _mm256_set1_pd(z[0]);
        for (int k = 0; k < p; ++k) {
            __m256d dk = _mm256_set1_pd(d[k]);
            __m256d sbk = _mm256_set1_pd(sb[k]);
            __m256d inv_sb1 = _mm256_set1_pd(1.0 / sb[k + 1]);
            __m256d next = _mm256_mul_pd(
                _mm256_sub_pd(_mm256_mul_pd(_mm256_sub_pd(t, dk), cur),
                              _mm256_mul_pd(sbk, prev)),
                inv_sb1);
            prev = cur;
            cur = next;
            acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(z[k + 1]), cur));
        }
        if (multiply)
            _mm256_storeu_pd(out + m, _mm256_mul_pd(_mm256_loadu_pd(out + m), acc));
        else
            _mm256_storeu_pd(out + m, acc);
    }
    if (m < n)
        scalar::dot_basis_batch(basis, z, x + m, out + m, n - m, multiply);
}

void axpy(double w, const double* x, double* y, std::size_t n) {
    const __m256d vw = _mm256_set1_pd(w);
    std::size_t m = 0;
    for (; m + 4 <= n; m += 4) {
        __m256d vy = _mm256_loadu_pd(y + m);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(vw, _mm256_loadu_pd(x + m)));
        _mm256_storeu_pd(y + m, vy);
    }
    for (; m < n; ++m) y[m] += w * x[m];
}

SumSq sum_sumsq(const double* x, std::size_t n) {
    __m256d s = _mm256_setzero_pd();
    __m256d sq = _mm256_setzero_pd();
    std::size_t m = 0;
    for (; m + 4 <= n; m += 4) {
        __m256d v = _mm256_loadu_pd(x + m);
        s = _mm256_add_pd(s, v);
        sq = _mm256_add_pd(sq, _mm256_mul_pd(v, v));
    }
    alignas(32) double bs[4], bq[4];
    _mm256_store_pd(bs, s);
    _mm256_store_pd(bq, sq);
    SumSq r;
    r.sum = (bs[0] + bs[1]) + (bs[2] + bs[3]);
    r.sumsq = (bq[0] + bq[1]) + (bq[2] + bq[3]);
    for (; m < n; ++m) {
        r.sum += x[m];
        r.sumsq += x[m] * x[m];
    }
    return r;
}

} // namespace ppflow::kernels::avx2

#endif // __x86_64__
