#pragma once

#include <optional>

#include "cfsim/dynamics.hpp"

namespace cfsim {

// Projection of a propagated unitary onto the dressed computational subspace,
// rows/columns ordered (000, 010, 100, 110); the qubit-basis reading is
// (|00>, |01>, |10>, |11>).
struct ComputationalUnitary {
    Eigen::Matrix4cd matrix;
    double subspace_norm = 0;  // Tr(M M^+), equals 4 for a leak-free gate
};

// Dressed computational states as columns (000, 010, 100, 110).
Matrix computational_columns(const DressedFrame& frame);

// M = P U P expressed in the dressed basis, for a full-dimension unitary.
ComputationalUnitary project(const Matrix& u_full, const DressedFrame& frame);

// Same, for a propagation that evolved exactly the four computational
// columns (in the fixed order) instead of the full unitary.
ComputationalUnitary project_columns(const Matrix& endpoint, const DressedFrame& frame);

// The ideal gate: identity on 00, exchange with -i sin(theta) amplitudes in
// the one-excitation block, phase e^{i phi} on 11.
Eigen::Matrix4cd ideal_fsim(double theta, double phi);

// Angles and the removed local-Z frame of a near-fSim unitary.
//   theta = arcsin(clamp(|M_{01,10}|, 0, 1))
//   phi   = local-Z-invariant phase combination, dual-formula across the
//           theta -> 90 deg degeneracy of the diagonal entries
// frame_phases = (gamma, p1, p2, q): global phase, the two diagonal
// single-qubit phase sums and the exchange-phase combination; dealigning M by
// them recovers ideal_fsim(theta, phi) exactly for an exact fSim input.
struct ExtractedAngles {
    double theta = 0;
    double phi = 0;
    std::array<double, 4> frame_phases{};
};
ExtractedAngles extract_angles(const ComputationalUnitary& m);

// M with the extracted global and local-Z phases removed.
Eigen::Matrix4cd dealigned(const ComputationalUnitary& m, const ExtractedAngles& a);

// F = (Tr(M M^+) + |Tr M|^2) / (d(d+1)) with M = target^+ * m, d = 4.
double fidelity(const Eigen::Matrix4cd& m, const Eigen::Matrix4cd& target);

struct GateReport {
    double theta = 0;            // rad
    double phi = 0;              // rad; includes the static-ZZ phase
    double phi_full_dressed = 0; // rad; alternative convention with every
                                 // dressed free phase (incl. ZZ) removed
    double leakage = 0;
    double fidelity = 0;         // against ideal_fsim(theta, phi)
    std::array<double, 4> single_qubit_phases{};
    double subspace_norm = 0;
    // Filled when an analytic control solution is supplied.
    std::optional<double> theta_predicted;
    std::optional<double> phi_predicted;
    std::optional<double> fidelity_vs_predicted;
};

// Assemble angles, leakage and fidelity from a propagation over the four
// computational columns. Free single-qubit evolution at the dressed
// frequencies is divided out before extraction; the ZZ combination of the
// four frequencies is physical and stays in phi.
GateReport gate_report(const PropagationResult& result, const DressedFrame& frame,
                       const std::optional<ControlSolution>& predicted = std::nullopt);

}  // namespace cfsim
