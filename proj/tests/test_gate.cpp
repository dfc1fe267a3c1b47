#include <doctest.h>

#include <random>

#include "cfsim/gate.hpp"
#include "cfsim/units.hpp"

using namespace cfsim;

namespace {

const DressedFrame& paper_frame() {
    static const DressedFrame frame = [] {
        const DeviceParams d = paper_device();
        return diagonalize(build_rwa_hamiltonian(d), d);
    }();
    return frame;
}

Eigen::Vector4cd z_frame(double a1, double a2) {
    Eigen::Vector4cd z;
    const Complex i(0, 1);
    z << 1.0, std::exp(i * a2), std::exp(i * a1), std::exp(i * (a1 + a2));
    return z;
}

ComputationalUnitary wrap(const Eigen::Matrix4cd& m) {
    ComputationalUnitary u;
    u.matrix = m;
    u.subspace_norm = (m * m.adjoint()).trace().real();
    return u;
}

}  // namespace

TEST_CASE("ideal fSim special points and unitarity") {
    CHECK((ideal_fsim(0.0, 0.0) - Eigen::Matrix4cd::Identity()).norm() == 0.0);

    const Eigen::Matrix4cd iswap_cz = ideal_fsim(units::pi / 2, units::pi);
    CHECK(std::abs(iswap_cz(1, 1)) < 1e-15);
    CHECK(std::abs(iswap_cz(1, 2) - Complex(0, -1)) < 1e-15);
    CHECK(std::abs(iswap_cz(2, 1) - Complex(0, -1)) < 1e-15);
    CHECK(std::abs(iswap_cz(3, 3) - Complex(-1, 0)) < 1e-15);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const Eigen::Matrix4cd u =
            ideal_fsim(0.5 * units::pi * U(rng), units::pi * (2 * U(rng) - 1));
        CHECK((u * u.adjoint() - Eigen::Matrix4cd::Identity()).norm() < 1e-14);
    }
}

TEST_CASE("projection of the identity and of a leaky unitary") {
    const DressedFrame& f = paper_frame();
    const int n = f.dims.total();
    const ComputationalUnitary id = project(Matrix::Identity(n, n), f);
    CHECK((id.matrix - Eigen::Matrix4cd::Identity()).norm() < 1e-12);
    CHECK(id.subspace_norm == doctest::Approx(4.0));

    // A unitary swapping dressed 110 with dressed 020: the 110 row and
    // column of M lose their weight.
    const Vector d110 = f.dressed_state(1, 1, 0);
    const Vector d020 = f.dressed_state(0, 2, 0);
    Matrix u = Matrix::Identity(n, n) - d110 * d110.adjoint() - d020 * d020.adjoint() +
               d020 * d110.adjoint() + d110 * d020.adjoint();
    const ComputationalUnitary leaky = project(u, f);
    CHECK(leaky.matrix.col(3).norm() < 1e-12);
    CHECK(leaky.matrix.row(3).norm() < 1e-12);
    CHECK(leaky.subspace_norm == doctest::Approx(3.0));
}

TEST_CASE("project and project_columns agree") {
    const DressedFrame& f = paper_frame();
    const int n = f.dims.total();
    std::mt19937 rng(11);
    std::normal_distribution<double> N(0.0, 1.0);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(N(rng), N(rng));
    const Matrix q = Eigen::HouseholderQR<Matrix>(a).householderQ();
    const ComputationalUnitary full = project(q, f);
    const ComputationalUnitary cols = project_columns(q * computational_columns(f), f);
    CHECK((full.matrix - cols.matrix).norm() < 1e-12);
}

TEST_CASE("extraction round-trips the ideal gate exactly") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double theta = 0.5 * units::pi * U(rng);
        const double phi = units::wrap_pi(units::pi * (2 * U(rng) - 1));
        const ExtractedAngles a = extract_angles(wrap(ideal_fsim(theta, phi)));
        CHECK(std::abs(a.theta - theta) < 1e-7);  // arcsin rounding near pi/2
        CHECK(units::wrap_pi(a.phi - phi) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("extraction is invariant under local-Z frames on both sides") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> U(-units::pi, units::pi);
    for (double theta : {0.03, 0.7, 1.3, 0.5 * units::pi}) {
        for (int i = 0; i < 20; ++i) {
            const double phi = units::wrap_pi(U(rng));
            const Complex g = std::exp(Complex(0, U(rng)));
            const Eigen::Matrix4cd m = g * z_frame(U(rng), U(rng)).asDiagonal() *
                                       ideal_fsim(theta, phi) *
                                       z_frame(U(rng), U(rng)).asDiagonal();
            const ExtractedAngles a = extract_angles(wrap(m));
            CHECK(std::abs(a.theta - theta) < 1e-7);
            CHECK(units::wrap_pi(a.phi - phi) == doctest::Approx(0.0).epsilon(1e-10));
            // Dealignment recovers the bare gate.
            CHECK((dealigned(wrap(m), a) - ideal_fsim(theta, phi)).norm() < 1e-9);
        }
    }
}

TEST_CASE("theta extraction is clamped, never a domain error") {
    Eigen::Matrix4cd m = ideal_fsim(units::pi / 2, 0.0);
    m(1, 2) *= 1.0 + 1e-9;  // numerically slightly super-unitary entry
    const ExtractedAngles a = extract_angles(wrap(m));
    CHECK(a.theta == doctest::Approx(units::pi / 2));
}

TEST_CASE("excess leakage raises an extraction error") {
    Eigen::Matrix4cd m = 0.8 * ideal_fsim(0.3, 0.2);
    CHECK_THROWS_AS(extract_angles(wrap(m)), ExtractionError);
}

TEST_CASE("fidelity identities") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> U(-units::pi, units::pi);
    const Eigen::Matrix4cd target = ideal_fsim(0.9, -1.2);
    CHECK(fidelity(target, target) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fidelity(Eigen::Matrix4cd::Zero(), target) == doctest::Approx(0.0));

    for (int i = 0; i < 10; ++i) {
        const Complex g = std::exp(Complex(0, U(rng)));
        CHECK(fidelity(g * target, target) == doctest::Approx(1.0).epsilon(1e-14));
    }

    // An exactly fSim-formed M reconstructs its own ideal gate.
    for (int i = 0; i < 10; ++i) {
        const double theta = 0.5 * units::pi * (0.5 + 0.5 * U(rng) / units::pi);
        const double phi = U(rng);
        const Eigen::Matrix4cd m = std::exp(Complex(0, U(rng))) *
                                   z_frame(U(rng), U(rng)).asDiagonal() *
                                   ideal_fsim(theta, phi) *
                                   z_frame(U(rng), U(rng)).asDiagonal();
        const ExtractedAngles a = extract_angles(wrap(m));
        CHECK(fidelity(dealigned(wrap(m), a), ideal_fsim(a.theta, a.phi)) ==
              doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("subspace norm accounts for the per-column leakage exactly") {
    const DressedFrame& f = paper_frame();
    // Columns produced by an actual short propagation with a drive.
    const DeviceParams d = f.device;
    const Matrix h0 = build_rwa_hamiltonian(d);
    std::vector<DriveTone> tones(1);
    tones[0].target = Mode::Q2;
    tones[0].amplitude = units::mhz_to_radns(250.0);
    tones[0].frequency = cphase_gap(f);
    PropagationOptions opts;
    opts.dt = 1e-3;
    PropagationResult res = propagate(h0, make_channels(d, tones), 30.0,
                                      computational_columns(f), {}, opts);
    res.initial_labels = {"000", "010", "100", "110"};

    const ComputationalUnitary m = project_columns(res.endpoint, f);
    double column_leak_sum = 0;
    for (int j = 0; j < 4; ++j) column_leak_sum += 1.0 - m.matrix.col(j).squaredNorm();
    CHECK(m.subspace_norm == doctest::Approx(4.0 - column_leak_sum).epsilon(1e-12));

    // The three-state average used for gate leakage is consistent with it.
    const double leak3 = computational_leakage(res, f);
    const double leak000 = 1.0 - m.matrix.col(0).squaredNorm();
    CHECK(m.subspace_norm ==
          doctest::Approx(4.0 - leak000 - 3.0 * leak3).epsilon(1e-10));
}

TEST_CASE("static gate report: a full ZZ period reads as the identity gate") {
    DeviceParams d = paper_device();
    d.dim_1 = d.dim_2 = 3;
    d.dim_c = 2;
    const Matrix h0 = build_rwa_hamiltonian(d);
    const DressedFrame f = diagonalize(h0, d);
    const double t_g = units::two_pi / std::abs(zz_strength(f));

    PropagationOptions opts;
    opts.dt = 1e-3;
    PropagationResult res =
        propagate(h0, {}, t_g, computational_columns(f), {}, opts);
    res.initial_labels = {"000", "010", "100", "110"};
    const GateReport rep = gate_report(res, f);
    CHECK(rep.theta < units::deg_to_rad(0.01));
    CHECK(std::abs(rep.phi) < units::deg_to_rad(0.01));
    CHECK(rep.leakage < 1e-7);
    CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("static ZZ strength matches the phase picked up by undriven evolution") {
    DeviceParams d = paper_device();
    d.dim_1 = d.dim_2 = 3;
    d.dim_c = 2;
    const Matrix h0 = build_rwa_hamiltonian(d);
    const DressedFrame f = diagonalize(h0, d);
    const double xi = zz_strength(f);
    // Evolve long enough for an O(1 rad) conditional phase, short of a wrap.
    const double t_g = 1.5 / std::abs(xi);

    PropagationOptions opts;
    opts.dt = 2e-3;
    PropagationResult res = propagate(h0, {}, t_g, computational_columns(f), {}, opts);
    res.initial_labels = {"000", "010", "100", "110"};
    const GateReport rep = gate_report(res, f);
    CHECK(rep.phi == doctest::Approx(-xi * t_g).epsilon(0.01));
}
