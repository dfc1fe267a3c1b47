#include <doctest.h>

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "cfsim/kernels.hpp"

using namespace cfsim;

namespace {

struct Split {
    std::vector<double> re, im;
};

Split to_split(const Eigen::MatrixXcd& m) {
    Split s;
    const int rows = m.rows(), cols = m.cols();
    s.re.resize(static_cast<size_t>(rows) * cols);
    s.im.resize(static_cast<size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            s.re[static_cast<size_t>(i) * cols + j] = m(i, j).real();
            s.im[static_cast<size_t>(i) * cols + j] = m(i, j).imag();
        }
    return s;
}

Eigen::MatrixXcd from_split(const Split& s, int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = std::complex<double>(s.re[static_cast<size_t>(i) * cols + j],
                                           s.im[static_cast<size_t>(i) * cols + j]);
    return m;
}

}  // namespace

TEST_CASE("matmul kernels agree with Eigen for assorted shapes") {
    std::mt19937 rng(42);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int n : {1, 3, 5, 17, 64, 100}) {
        for (int k : {1, 2, 3, 4, 5, 8, 11}) {
            Eigen::MatrixXcd a(n, n), b(n, k);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) a(i, j) = {N(rng), N(rng)};
                for (int j = 0; j < k; ++j) b(i, j) = {N(rng), N(rng)};
            }
            const Eigen::MatrixXcd expected = a * b;
            const Split sa = to_split(a), sb = to_split(b);

            for (const auto* kern : {&kernels::scalar_kernels(),
                                     kernels::avx2_available() ? &kernels::avx2_kernels()
                                                               : nullptr}) {
                if (!kern) continue;
                Split sc = to_split(Eigen::MatrixXcd::Zero(n, k));
                kern->matmul_block(sa.re.data(), sa.im.data(), sb.re.data(), sb.im.data(),
                                   sc.re.data(), sc.im.data(), n, k);
                const double err = (from_split(sc, n, k) - expected).norm();
                CHECK(err < 1e-12 * std::max(1.0, expected.norm()));
            }
        }
    }
}

TEST_CASE("diagonal phase kernels agree with Eigen") {
    std::mt19937 rng(7);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int n : {1, 5, 33, 100}) {
        for (int k : {1, 3, 4, 9}) {
            Eigen::MatrixXcd b(n, k);
            Eigen::VectorXcd p(n);
            for (int i = 0; i < n; ++i) {
                p(i) = {N(rng), N(rng)};
                for (int j = 0; j < k; ++j) b(i, j) = {N(rng), N(rng)};
            }
            const Eigen::MatrixXcd expected = p.asDiagonal() * b;
            std::vector<double> pr(n), pi(n);
            for (int i = 0; i < n; ++i) {
                pr[i] = p(i).real();
                pi[i] = p(i).imag();
            }
            for (const auto* kern : {&kernels::scalar_kernels(),
                                     kernels::avx2_available() ? &kernels::avx2_kernels()
                                                               : nullptr}) {
                if (!kern) continue;
                Split sb = to_split(b);
                kern->diag_scale_block(pr.data(), pi.data(), sb.re.data(), sb.im.data(),
                                       n, k);
                CHECK((from_split(sb, n, k) - expected).norm() <
                      1e-12 * std::max(1.0, expected.norm()));
            }
        }
    }
}

TEST_CASE("dispatched kernels are one of the tested variants") {
    const auto& active = kernels::active_kernels();
    const bool is_scalar = active.matmul_block == kernels::scalar_kernels().matmul_block;
    const bool is_avx2 = kernels::avx2_available() &&
                         active.matmul_block == kernels::avx2_kernels().matmul_block;
    CHECK((is_scalar || is_avx2));
}
