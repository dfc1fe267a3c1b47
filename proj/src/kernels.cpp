#include "cfsim/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cfsim::kernels {

namespace {

void matmul_block_scalar(const double* ar, const double* ai,
                         const double* br, const double* bi,
                         double* cr, double* ci, int n, int k) {
    for (int i = 0; i < n; ++i) {
        double* crow = cr + static_cast<long>(i) * k;
        double* cirow = ci + static_cast<long>(i) * k;
        for (int c = 0; c < k; ++c) {
            crow[c] = 0.0;
            cirow[c] = 0.0;
        }
        const double* arow = ar + static_cast<long>(i) * n;
        const double* airow = ai + static_cast<long>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double re = arow[j];
            const double im = airow[j];
            const double* brow = br + static_cast<long>(j) * k;
            const double* birow = bi + static_cast<long>(j) * k;
            for (int c = 0; c < k; ++c) {
                crow[c] += re * brow[c] - im * birow[c];
                cirow[c] += re * birow[c] + im * brow[c];
            }
        }
    }
}

void diag_scale_block_scalar(const double* pr, const double* pi,
                             double* br, double* bi, int n, int k) {
    for (int j = 0; j < n; ++j) {
        const double re = pr[j];
        const double im = pi[j];
        double* brow = br + static_cast<long>(j) * k;
        double* birow = bi + static_cast<long>(j) * k;
        for (int c = 0; c < k; ++c) {
            const double xr = brow[c];
            const double xi = birow[c];
            brow[c] = re * xr - im * xi;
            birow[c] = re * xi + im * xr;
        }
    }
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{matmul_block_scalar, diag_scale_block_scalar, "scalar"};
    return k;
}

#if !defined(CFSIM_HAVE_AVX2)
const Kernels& avx2_kernels() { return scalar_kernels(); }
bool avx2_available() { return false; }
#endif

const Kernels& active_kernels() {
    static const Kernels& chosen = []() -> const Kernels& {
        if (const char* env = std::getenv("CFSIM_KERNELS")) {
            if (std::strcmp(env, "scalar") == 0) return scalar_kernels();
            if (std::strcmp(env, "avx2") == 0 && avx2_available()) return avx2_kernels();
        }
        return avx2_available() ? avx2_kernels() : scalar_kernels();
    }();
    return chosen;
}

}  // namespace cfsim::kernels
