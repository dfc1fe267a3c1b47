#pragma once

#include <string>

// Hot inner loops of the time-stepping propagator, in split-complex layout
// (separate real/imaginary arrays). Matrices are row-major n x n; state
// blocks are n rows of k interleaved columns (element (j, c) at j*k + c).
// A scalar reference implementation always exists; an AVX2/FMA variant is
// selected at runtime on x86 when the CPU supports it. Both variants are
// equivalence-tested against each other and against Eigen.
namespace cfsim::kernels {

// C = A * B. A: n x n split-complex, B/C: n x k blocks. C must not alias B.
using MatmulBlockFn = void (*)(const double* ar, const double* ai,
                               const double* br, const double* bi,
                               double* cr, double* ci, int n, int k);

// B(j, :) *= (pr[j] + i*pi[j]) for every row j: diagonal phase application.
using DiagScaleBlockFn = void (*)(const double* pr, const double* pi,
                                  double* br, double* bi, int n, int k);

struct Kernels {
    MatmulBlockFn matmul_block = nullptr;
    DiagScaleBlockFn diag_scale_block = nullptr;
    const char* name = "";
};

// Scalar reference kernels (always available).
const Kernels& scalar_kernels();

// AVX2+FMA kernels; only callable when avx2_supported() is true.
const Kernels& avx2_kernels();
bool avx2_available();

// Dispatched kernels: AVX2 when supported, otherwise scalar. The environment
// variable CFSIM_KERNELS=scalar|avx2 overrides the automatic choice.
const Kernels& active_kernels();

}  // namespace cfsim::kernels
