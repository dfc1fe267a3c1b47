#pragma once

#include <array>
#include <string>
#include <vector>

#include "cfsim/model.hpp"

namespace cfsim {

// Eigen-decomposition of the undriven Hamiltonian with bare-state labels and
// the per-mode split of the transformed number operators,
//   U0^+ n_m U0 = diag(N^m) + C^m   (C^m Hermitian, zero diagonal).
// Columns of u0 are eigenvectors; label_to_column[flat] maps a bare state to
// the eigenvector it claims under greedy maximum-overlap matching.
struct DressedFrame {
    DeviceParams device;
    ModeDims dims;
    Eigen::VectorXd eigenvalues;                 // rad/ns, ascending
    Matrix u0;                                   // eigenvectors in columns
    std::vector<int> label_to_column;            // bare flat index -> column
    std::vector<double> label_overlap;           // |<bare|dressed>| at claim
    std::vector<int> ambiguous_labels;           // labels claimed below 0.5
    std::array<Eigen::VectorXd, 3> n_coeffs;     // per mode, by column
    std::array<Matrix, 3> c_coeffs;              // per mode, by column

    int column(const BasisIndex& b) const;
    int column(int q1, int q2, int r) const;
    double eigenfrequency(int q1, int q2, int r) const;
    Vector dressed_state(int q1, int q2, int r) const;

    double n_coeff(Mode m, int q1, int q2, int r) const;
    Complex c_coeff(Mode m, const BasisIndex& a, const BasisIndex& b) const;

    BasisIndex index(int q1, int q2, int r) const {
        return make_basis_index(q1, q2, r, dims);
    }
};

// Full eigendecomposition of h0 with deterministic gauge (largest-magnitude
// component of every eigenvector made real-positive) and greedy
// maximum-overlap labeling. Labels claimed with best overlap below 0.5 are
// recorded in ambiguous_labels rather than failing; strong coupling
// legitimately mixes states.
DressedFrame diagonalize(const Matrix& h0, const DeviceParams& device);

// Signed detuning w_a - w_b between two labeled dressed states.
double detuning(const DressedFrame& frame, const BasisIndex& a, const BasisIndex& b);

// Static ZZ strength E_110 + E_000 - E_100 - E_010 (coupler ground).
double zz_strength(const DressedFrame& frame);

// Positive gaps used as resonance assignments for the two driven transitions.
double iswap_gap(const DressedFrame& frame);    // |w_010 - w_100|
double cphase_gap(const DressedFrame& frame);   // w_020 - w_110, must be > 0

// Coefficients of the closed-form coupling laws for one transition a<->b
// driven by `drive_mode` with `spectator_mode` carrying the other tone:
//   alpha = C^drive_{a,b} / 2   (real in the fixed gauge)
//   beta  = N^1_a - N^1_b       (tone-1 mode difference)
//   gamma = N^2_a - N^2_b       (tone-2 mode difference)
struct CouplingConstants {
    double alpha = 0;
    double beta = 0;
    double gamma = 0;
};

CouplingConstants coupling_constants(const DressedFrame& frame,
                                     const BasisIndex& a, const BasisIndex& b,
                                     Mode drive_mode, Mode spectator_mode);

}  // namespace cfsim
