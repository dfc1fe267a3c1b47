// AVX2/FMA variants of the propagation kernels. Compiled with -mavx2 -mfma
// on x86 only; callers must gate on avx2_available().
#include "cfsim/kernels.hpp"

#include <immintrin.h>

namespace cfsim::kernels {

namespace {

// Vectorized over the k columns of the state block, FMA-accumulated over j.
// Split-complex layout keeps the four streams (ar*br, ai*bi, ar*bi, ai*br)
// as pure FMA chains with no shuffles.
// Single-column variant: vectorize the dot product over the matrix row.
void matvec_single_avx2(const double* ar, const double* ai,
                        const double* br, const double* bi,
                        double* cr, double* ci, int n) {
    const int n4 = n & ~3;
    for (int i = 0; i < n; ++i) {
        const double* arow = ar + static_cast<long>(i) * n;
        const double* airow = ai + static_cast<long>(i) * n;
        __m256d accr = _mm256_setzero_pd();
        __m256d acci = _mm256_setzero_pd();
        for (int j = 0; j < n4; j += 4) {
            const __m256d re = _mm256_loadu_pd(arow + j);
            const __m256d im = _mm256_loadu_pd(airow + j);
            const __m256d xr = _mm256_loadu_pd(br + j);
            const __m256d xi = _mm256_loadu_pd(bi + j);
            accr = _mm256_fmadd_pd(re, xr, accr);
            accr = _mm256_fnmadd_pd(im, xi, accr);
            acci = _mm256_fmadd_pd(re, xi, acci);
            acci = _mm256_fmadd_pd(im, xr, acci);
        }
        alignas(32) double tr[4], ti[4];
        _mm256_store_pd(tr, accr);
        _mm256_store_pd(ti, acci);
        double sr = tr[0] + tr[1] + tr[2] + tr[3];
        double si = ti[0] + ti[1] + ti[2] + ti[3];
        for (int j = n4; j < n; ++j) {
            sr += arow[j] * br[j] - airow[j] * bi[j];
            si += arow[j] * bi[j] + airow[j] * br[j];
        }
        cr[i] = sr;
        ci[i] = si;
    }
}

void matmul_block_avx2(const double* ar, const double* ai,
                       const double* br, const double* bi,
                       double* cr, double* ci, int n, int k) {
    if (k == 1) {
        matvec_single_avx2(ar, ai, br, bi, cr, ci, n);
        return;
    }
    const int k4 = k & ~3;
    for (int i = 0; i < n; ++i) {
        double* crow = cr + static_cast<long>(i) * k;
        double* cirow = ci + static_cast<long>(i) * k;
        const double* arow = ar + static_cast<long>(i) * n;
        const double* airow = ai + static_cast<long>(i) * n;
        for (int c = 0; c < k4; c += 4) {
            __m256d accr = _mm256_setzero_pd();
            __m256d acci = _mm256_setzero_pd();
            for (int j = 0; j < n; ++j) {
                const __m256d re = _mm256_set1_pd(arow[j]);
                const __m256d im = _mm256_set1_pd(airow[j]);
                const __m256d xr = _mm256_loadu_pd(br + static_cast<long>(j) * k + c);
                const __m256d xi = _mm256_loadu_pd(bi + static_cast<long>(j) * k + c);
                accr = _mm256_fmadd_pd(re, xr, accr);
                accr = _mm256_fnmadd_pd(im, xi, accr);
                acci = _mm256_fmadd_pd(re, xi, acci);
                acci = _mm256_fmadd_pd(im, xr, acci);
            }
            _mm256_storeu_pd(crow + c, accr);
            _mm256_storeu_pd(cirow + c, acci);
        }
        for (int c = k4; c < k; ++c) {
            double sr = 0.0, si = 0.0;
            for (int j = 0; j < n; ++j) {
                const double re = arow[j];
                const double im = airow[j];
                const double xr = br[static_cast<long>(j) * k + c];
                const double xi = bi[static_cast<long>(j) * k + c];
                sr += re * xr - im * xi;
                si += re * xi + im * xr;
            }
            crow[c] = sr;
            cirow[c] = si;
        }
    }
}

void diag_scale_block_avx2(const double* pr, const double* pi,
                           double* br, double* bi, int n, int k) {
    const int k4 = k & ~3;
    for (int j = 0; j < n; ++j) {
        const __m256d re = _mm256_set1_pd(pr[j]);
        const __m256d im = _mm256_set1_pd(pi[j]);
        double* brow = br + static_cast<long>(j) * k;
        double* birow = bi + static_cast<long>(j) * k;
        for (int c = 0; c < k4; c += 4) {
            const __m256d xr = _mm256_loadu_pd(brow + c);
            const __m256d xi = _mm256_loadu_pd(birow + c);
            __m256d yr = _mm256_mul_pd(re, xr);
            yr = _mm256_fnmadd_pd(im, xi, yr);
            __m256d yi = _mm256_mul_pd(re, xi);
            yi = _mm256_fmadd_pd(im, xr, yi);
            _mm256_storeu_pd(brow + c, yr);
            _mm256_storeu_pd(birow + c, yi);
        }
        for (int c = k4; c < k; ++c) {
            const double xr = brow[c];
            const double xi = birow[c];
            brow[c] = pr[j] * xr - pi[j] * xi;
            birow[c] = pr[j] * xi + pi[j] * xr;
        }
    }
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels k{matmul_block_avx2, diag_scale_block_avx2, "avx2"};
    return k;
}

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace cfsim::kernels
