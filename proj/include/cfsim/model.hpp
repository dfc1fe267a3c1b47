#pragma once

#include <Eigen/Dense>
#include <optional>

#include "cfsim/device.hpp"

namespace cfsim {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Full model: two Kerr oscillators exchange-coupled via a (possibly anharmonic)
// coupler mode, in the fixed row-major |q1 q2 r> tensor basis.
// ---------------------------------------------------------------------------

// H0 = sum_a [w_a n_a + (d_a/2) n_a(n_a - 1)] + g_1c(a1+ac^+ + h.c.)
//      + g_2c(a2+ac^+ + h.c.) + g_12(a1+a2^+ + h.c.)   (exchange only)
Matrix build_rwa_hamiltonian(const DeviceParams& device);

// Same diagonal, but every coupling is g (a^+ + a)(a^+ + a), keeping the
// counter-rotating a^+a^+ and aa terms.
Matrix build_non_rwa_hamiltonian(const DeviceParams& device);

// Number operator of one mode embedded in the full tensor basis (diagonal).
Matrix build_drive_generator(const DeviceParams& device, Mode mode);

// Occupation of `mode` for every basis state; the diagonal of the above.
Eigen::VectorXd occupation_diagonal(const DeviceParams& device, Mode mode);

// ---------------------------------------------------------------------------
// Two-qutrit toy model in the 5-state basis (|01>, |10>, |11>, |02>, |20>).
// ---------------------------------------------------------------------------

struct ToyTone {
    double amplitude = 0;  // rad/ns
    double frequency = 0;  // rad/ns
};

struct ToyParams {
    double Delta = 0;   // static 01-10 detuning (rad/ns)
    double delta = 0;   // shared anharmonicity (rad/ns)
    double g = 0;       // qutrit-qutrit coupling (rad/ns)
    ToyTone drive1{};   // modulates qutrit 1
    ToyTone drive2{};   // modulates qutrit 2

    // DC + AC variant: g(t) = g0 + ac.amplitude * sin(ac.frequency * t),
    // qubits on resonance.
    std::optional<double> g0;
    std::optional<ToyTone> ac;

    void validate() const;

    // Detuning of the 11<->02 transition at face value of the static matrix:
    // E_11 - E_02 = Delta - delta. The near-resonant second drive sits at
    // nu_2 = (Delta - delta) - epsilon.
    double cphase_gap() const { return Delta - delta; }
    double epsilon() const { return cphase_gap() - drive2.frequency; }
};

// Static 5x5 matrix plus the drive diagonal
// diag(h2, h1, h1+h2, 2*h2, 2*h1), h_i = Omega_i sin(nu_i t).
Matrix build_toy_hamiltonian(const ToyParams& params, double t);

// DC+AC variant: uniform g(t) in all coupling entries, anharmonicities
// delta_2, delta_1 on |02>, |20>, zero one-excitation diagonal.
Matrix build_toy_dc_ac_hamiltonian(const ToyParams& params, double t);

// Exact interaction-picture matrix of the driven toy model (all diagonal
// terms rotated away); the frame transformation is toy_frame_unitary.
Matrix build_toy_rotating_hamiltonian(const ToyParams& params, double t);

// Diagonal unitary U(t) with H_I = U^+ H U - i U^+ dU/dt; states evolved
// under the two pictures satisfy psi_I(t) = U(t)^+ psi_lab(t).
Matrix toy_frame_unitary(const ToyParams& params, double t);

}  // namespace cfsim
