#include <doctest.h>

#include <random>

#include "cfsim/model.hpp"
#include "cfsim/units.hpp"

using namespace cfsim;

namespace {

DeviceParams random_device(std::mt19937& rng, int d1 = 3, int d2 = 3, int dc = 2) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    DeviceParams d;
    d.omega_1 = units::ghz_to_radns(6.0 + 2.0 * U(rng));
    d.omega_2 = units::ghz_to_radns(6.0 + 2.0 * U(rng));
    d.omega_c = units::ghz_to_radns(8.0 + 1.5 * U(rng));
    d.delta_1 = units::mhz_to_radns(-300.0 + 150.0 * U(rng));
    d.delta_2 = units::mhz_to_radns(-300.0 + 150.0 * U(rng));
    d.delta_c = units::mhz_to_radns(-50.0 + 100.0 * U(rng));
    d.g_1c = units::mhz_to_radns(40.0 + 150.0 * U(rng));
    d.g_2c = units::mhz_to_radns(40.0 + 150.0 * U(rng));
    d.g_12 = units::mhz_to_radns(20.0 * U(rng));
    d.dim_1 = d1;
    d.dim_2 = d2;
    d.dim_c = dc;
    return d;
}

double hermiticity_error(const Matrix& h) { return (h - h.adjoint()).norm() / h.norm(); }

Eigen::VectorXd total_occupation(const DeviceParams& d) {
    return occupation_diagonal(d, Mode::Q1) + occupation_diagonal(d, Mode::Q2) +
           occupation_diagonal(d, Mode::Coupler);
}

}  // namespace

TEST_CASE("basis indexing round-trips over the full range") {
    const ModeDims dims{5, 4, 3};
    for (int f = 0; f < dims.total(); ++f) {
        const BasisIndex b = unflatten(f, dims);
        CHECK(flat_index(b.q1, b.q2, b.r, dims) == f);
        CHECK(make_basis_index(b.q1, b.q2, b.r, dims).flat == f);
    }
    CHECK_THROWS_AS(make_basis_index(5, 0, 0, dims), ConfigError);
}

TEST_CASE("uncoupled Hamiltonian is diagonal with Kerr energies") {
    DeviceParams d = paper_device();
    d.g_1c = d.g_2c = d.g_12 = 0;
    const Matrix h = build_rwa_hamiltonian(d);
    CHECK(h.isDiagonal(1e-300));
    for (int f = 0; f < d.dims().total(); ++f) {
        const BasisIndex b = unflatten(f, d.dims());
        auto kerr = [](double w, double dl, int n) {
            return w * n + 0.5 * dl * n * (n - 1);
        };
        const double expected = kerr(d.omega_1, d.delta_1, b.q1) +
                                kerr(d.omega_2, d.delta_2, b.q2) +
                                kerr(d.omega_c, d.delta_c, b.r);
        CHECK(h(f, f).real() == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("paper device builds a 100x100 Hermitian matrix") {
    const Matrix h = build_rwa_hamiltonian(paper_device());
    CHECK(h.rows() == 100);
    CHECK(h.cols() == 100);
    CHECK(hermiticity_error(h) < 1e-12);
}

TEST_CASE("builders are Hermitian for random parameter draws") {
    std::mt19937 rng(11);
    for (int i = 0; i < 50; ++i) {
        const DeviceParams d = random_device(rng);
        CHECK(hermiticity_error(build_rwa_hamiltonian(d)) < 1e-12);
        CHECK(hermiticity_error(build_non_rwa_hamiltonian(d)) < 1e-12);
    }
}

TEST_CASE("dimension cap raises a configuration error") {
    DeviceParams d = paper_device();
    d.dim_c = 5;  // 125 levels with the default cap of 200 is fine
    d.dim_cap = 100;
    CHECK_THROWS_AS(build_rwa_hamiltonian(d), ConfigError);
}

TEST_CASE("non-RWA equals RWA when couplings vanish") {
    DeviceParams d = paper_device();
    d.g_1c = d.g_2c = d.g_12 = 0;
    CHECK((build_non_rwa_hamiltonian(d) - build_rwa_hamiltonian(d)).norm() == 0.0);
}

TEST_CASE("non-RWA difference contains only double-raising and double-lowering blocks") {
    std::mt19937 rng(3);
    const DeviceParams d = random_device(rng, 3, 3, 2);
    const Matrix diff = build_non_rwa_hamiltonian(d) - build_rwa_hamiltonian(d);
    const ModeDims dims = d.dims();
    for (int a = 0; a < dims.total(); ++a)
        for (int b = 0; b < dims.total(); ++b) {
            if (std::abs(diff(a, b)) < 1e-14) continue;
            const BasisIndex ia = unflatten(a, dims);
            const BasisIndex ib = unflatten(b, dims);
            const int dq1 = ia.q1 - ib.q1, dq2 = ia.q2 - ib.q2, dr = ia.r - ib.r;
            // Exactly one coupled pair changes, both occupations in the same
            // direction (a+a+ or aa), total excitation changing by +-2.
            const bool pair_1c = dq2 == 0 && dq1 == dr && std::abs(dq1) == 1;
            const bool pair_2c = dq1 == 0 && dq2 == dr && std::abs(dq2) == 1;
            const bool pair_12 = dr == 0 && dq1 == dq2 && std::abs(dq1) == 1;
            CHECK((pair_1c || pair_2c || pair_12));
        }
}

TEST_CASE("RWA Hamiltonian conserves total excitation number; non-RWA does not") {
    std::mt19937 rng(5);
    const DeviceParams d = random_device(rng);
    const Eigen::VectorXd n_tot = total_occupation(d);
    const Matrix ntot = n_tot.cast<Complex>().asDiagonal();
    const Matrix h_rwa = build_rwa_hamiltonian(d);
    const Matrix h_full = build_non_rwa_hamiltonian(d);
    CHECK((h_rwa * ntot - ntot * h_rwa).norm() < 1e-12 * h_rwa.norm());
    CHECK((h_full * ntot - ntot * h_full).norm() > 1e-6);
}

TEST_CASE("drive generator is the embedded number operator") {
    DeviceParams d = paper_device();
    d.dim_1 = d.dim_2 = d.dim_c = 2;
    const Matrix n1 = build_drive_generator(d, Mode::Q1);
    Eigen::VectorXd expected(8);
    expected << 0, 0, 0, 0, 1, 1, 1, 1;
    CHECK((n1.diagonal().real() - expected).norm() == 0.0);
    CHECK(n1.diagonal().imag().norm() == 0.0);
}

TEST_CASE("drive generator trace counts occupations combinatorially") {
    const DeviceParams d = paper_device();
    for (Mode m : {Mode::Q1, Mode::Q2, Mode::Coupler}) {
        const int dim = d.dims().dim(m);
        const double others = d.dims().total() / dim;
        const double expected = 0.5 * dim * (dim - 1) * others;
        CHECK(build_drive_generator(d, m).trace().real() ==
              doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("drive generator commutes with H0 only when its couplings vanish") {
    DeviceParams d = paper_device();
    auto comm_norm = [&](Mode m) {
        const Matrix h = build_rwa_hamiltonian(d);
        const Matrix n = build_drive_generator(d, m);
        return (h * n - n * h).norm();
    };
    CHECK(comm_norm(Mode::Q1) > 1e-3);
    d.g_1c = 0;  // qubit 1 now only couples through g_12 = 0
    CHECK(comm_norm(Mode::Q1) < 1e-14);
}

// ---------------------------------------------------------------------------
// Toy model
// ---------------------------------------------------------------------------

namespace {

ToyParams paper_toy() {
    ToyParams p;
    p.Delta = units::mhz_to_radns(450.0);
    p.delta = units::mhz_to_radns(-200.0);
    p.g = units::mhz_to_radns(10.0);
    return p;
}

}  // namespace

TEST_CASE("undriven toy Hamiltonian matches the five-state matrix") {
    ToyParams p = paper_toy();
    const Matrix h = build_toy_hamiltonian(p, 17.3);
    const double s2g = std::sqrt(2.0) * p.g;
    Matrix expected = Matrix::Zero(5, 5);
    expected(0, 1) = expected(1, 0) = p.g;
    expected(1, 1) = p.Delta;
    expected(2, 2) = p.Delta;
    expected(2, 3) = expected(3, 2) = s2g;
    expected(2, 4) = expected(4, 2) = s2g;
    expected(3, 3) = p.delta;
    expected(4, 4) = 2 * p.Delta + p.delta;
    CHECK((h - expected).norm() == 0.0);
}

TEST_CASE("toy drive diagonal vanishes at t = 0 and matches the pattern at random times") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    ToyParams p = paper_toy();
    p.drive1 = {units::mhz_to_radns(80.0), units::mhz_to_radns(450.0)};
    p.drive2 = {units::mhz_to_radns(120.0), units::mhz_to_radns(250.0)};
    const Matrix h0 = build_toy_hamiltonian(paper_toy(), 0.0);
    CHECK((build_toy_hamiltonian(p, 0.0) - h0).norm() == 0.0);

    for (int i = 0; i < 20; ++i) {
        const double t = 100.0 * U(rng);
        const Matrix h = build_toy_hamiltonian(p, t);
        const double h1 = p.drive1.amplitude * std::sin(p.drive1.frequency * t);
        const double h2 = p.drive2.amplitude * std::sin(p.drive2.frequency * t);
        Eigen::VectorXd drive(5);
        drive << h2, h1, h1 + h2, 2 * h2, 2 * h1;
        CHECK(((h - h0).diagonal().real() - drive).norm() < 1e-12);
        CHECK((h - h0).diagonal().imag().norm() == 0.0);
        CHECK(h(2, 3) == Complex(std::sqrt(2.0) * p.g, 0));
        CHECK(h(2, 4) == Complex(std::sqrt(2.0) * p.g, 0));
    }
}

TEST_CASE("DC+AC toy model: DC-only limit and peak sample") {
    ToyParams p = paper_toy();
    p.Delta = 0;
    p.g0 = units::mhz_to_radns(10.0);
    p.ac = ToyTone{0.0, units::mhz_to_radns(200.0)};
    const Matrix h_dc = build_toy_dc_ac_hamiltonian(p, 7.7);
    CHECK(h_dc(0, 1).real() == doctest::Approx(*p.g0));
    CHECK(h_dc(2, 3).real() == doctest::Approx(std::sqrt(2.0) * *p.g0));
    CHECK(h_dc(3, 3).real() == doctest::Approx(p.delta));
    CHECK(h_dc(4, 4).real() == doctest::Approx(p.delta));

    p.ac->amplitude = units::mhz_to_radns(30.0);
    const double t_peak = 0.5 * units::pi / p.ac->frequency;  // sin = 1
    const Matrix h_pk = build_toy_dc_ac_hamiltonian(p, t_peak);
    CHECK(h_pk(0, 1).real() ==
          doctest::Approx(*p.g0 + p.ac->amplitude).epsilon(1e-9));
}

TEST_CASE("DC-only spectrum: +-g0 exchange pair and the 3x3 block eigenvalues") {
    ToyParams p = paper_toy();
    p.Delta = 0;
    p.g0 = units::mhz_to_radns(10.0);
    p.ac = ToyTone{0.0, units::mhz_to_radns(200.0)};
    const Matrix h = build_toy_dc_ac_hamiltonian(p, 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXd ev = es.eigenvalues();
    // One-excitation pair gives -g0, +g0; the two-excitation block keeps the
    // antisymmetric (02-20) state at delta and splits the bright pair.
    Eigen::Matrix2d bright;
    bright << 0.0, 2.0 * *p.g0, 2.0 * *p.g0, p.delta;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es2(bright);
    std::vector<double> expected = {-*p.g0, *p.g0, p.delta, es2.eigenvalues()(0),
                                    es2.eigenvalues()(1)};
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < 5; ++i)
        CHECK(ev(i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("rotating toy frame collapses to static couplings when undriven and degenerate") {
    ToyParams p;
    p.Delta = 0;
    p.delta = 0;
    p.g = units::mhz_to_radns(10.0);
    const Matrix h = build_toy_rotating_hamiltonian(p, 3.1);
    CHECK(h(0, 1) == Complex(p.g, 0));
    CHECK(h(2, 3) == Complex(std::sqrt(2.0) * p.g, 0));
    CHECK(h(2, 4) == Complex(std::sqrt(2.0) * p.g, 0));
}

TEST_CASE("rotating toy Hamiltonian is Hermitian at random times") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> U(0.0, 200.0);
    ToyParams p = paper_toy();
    p.drive1 = {units::mhz_to_radns(90.0), units::mhz_to_radns(450.0)};
    p.drive2 = {units::mhz_to_radns(60.0), units::mhz_to_radns(250.0)};
    for (int i = 0; i < 100; ++i) {
        const Matrix h = build_toy_rotating_hamiltonian(p, U(rng));
        CHECK((h - h.adjoint()).norm() < 1e-14);
    }
}

TEST_CASE("envelope shapes") {
    EnvelopeSpec rect;
    CHECK(rect.value(-1.0, 100.0) == 0.0);
    CHECK(rect.value(50.0, 100.0) == 1.0);
    CHECK(rect.value(101.0, 100.0) == 0.0);

    EnvelopeSpec ft;
    ft.kind = EnvelopeSpec::Kind::FlatTopGaussian;
    ft.tau1 = 10.0;
    ft.sigma = 5.0;
    ft.validate(100.0);
    CHECK(ft.value(0.0, 100.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(ft.value(50.0, 100.0) == 1.0);
    CHECK(ft.value(100.0, 100.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(ft.value(95.0, 100.0) == doctest::Approx(std::exp(-0.5)));

    EnvelopeSpec bad = ft;
    bad.tau2 = 70.0;  // 2*10 + 70 != 100
    CHECK_THROWS_AS(bad.validate(100.0), ConfigError);
}
