#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cfsim/spectrum.hpp"

namespace cfsim {

// ---------------------------------------------------------------------------
// Closed-form effective couplings (rotating-wave stationary terms).
// The stationary coefficient carries a frame-dependent factor of i that makes
// the interaction Y-type in the chosen rotating frame; values here are the
// real magnitudes with sign, which is what every downstream formula consumes.
// ---------------------------------------------------------------------------

struct EffectiveCoupling {
    double magnitude = 0;   // rad/ns, signed
    double detuning = 0;    // rad/ns; 0 when resonant
};

// Resonant single drive: g = alpha * W1 * [J2 + J0](beta*W1/nu1).
EffectiveCoupling g_single(const CouplingConstants& cc, double omega_1, double nu_1);

// One resonant + one off-resonant drive:
// g1 = alpha * W1 * [J2 + J0](beta*W1/nu1) * J0(gamma*W2/nu2).
EffectiveCoupling g_crosstalk(const CouplingConstants& cc, double omega_1, double nu_1,
                              double omega_2, double nu_2);

// N drives, exactly one resonant: the crosstalk J0 factors multiply.
struct OffResonantDrive {
    double gamma = 0;       // N-coefficient difference for this drive's mode
    double amplitude = 0;   // rad/ns
    double frequency = 0;   // rad/ns
};
EffectiveCoupling g_multi(const CouplingConstants& cc, double omega_1, double nu_1,
                          const std::vector<OffResonantDrive>& others);

// Near-resonant CPHASE transition driven by tone 2 with tone 1 far detuned:
// g2 = alpha * W2 * J0(beta*W1/nu1) * [J2 + J0](gamma*W2/nu2), plus the slow
// phase detuning Delta_110,020 - nu2 carried alongside.
EffectiveCoupling g_cphase(const CouplingConstants& cc, double omega_1, double nu_1,
                           double omega_2, double nu_2, double delta_110_020);

// ---------------------------------------------------------------------------
// Generalized coefficient series in the dressed rotating frame. Each term of
//   G(t)_{a,b} = sum_n  amplitude * exp(i * oscillation * t)
// carries Fourier indices (n_r, n_1, n_2) over the (coupler, qubit-1,
// qubit-2) tones. The stationary (oscillation ~ 0) term reproduces the
// closed forms above.
// ---------------------------------------------------------------------------

struct SeriesDrive {
    Mode target = Mode::Q1;
    double amplitude = 0;   // rad/ns
    double frequency = 0;   // rad/ns
    double phase = 0;       // rad
};

struct GTerm {
    int n_r = 0, n_1 = 0, n_2 = 0;
    Complex amplitude;      // rad/ns
    double oscillation = 0; // rad/ns
};

std::vector<GTerm> g_series(const DressedFrame& frame,
                            const BasisIndex& a, const BasisIndex& b,
                            const std::vector<SeriesDrive>& drives, int cutoff);

// Sum of series amplitudes with |oscillation| below `freq_tol`.
Complex g_series_stationary(const std::vector<GTerm>& terms, double freq_tol);

// All transitions whose generalized resonance residual
// |w_a - w_b - n_r*nu_r - n_1*nu_1 - n_2*nu_2| falls below `threshold`,
// sorted by residual. Photon numbers bounded by max_photons.
struct ResonanceHit {
    BasisIndex a, b;
    int n_r = 0, n_1 = 0, n_2 = 0;
    double residual = 0;    // rad/ns
};
std::vector<ResonanceHit> resonance_scan(const DressedFrame& frame,
                                         const std::vector<SeriesDrive>& drives,
                                         int max_photons, double threshold);

// ---------------------------------------------------------------------------
// Leakage-minimizing amplitude and the gate-angle control laws.
// ---------------------------------------------------------------------------

enum class SolveStatus { Found, Infeasible, Unsolvable };

struct AmplitudeSolution {
    SolveStatus status = SolveStatus::Unsolvable;
    double omega_2 = 0;     // rad/ns
    double g2_target = 0;   // rad/ns (signed)
    bool feasible() const { return status == SolveStatus::Found; }
};

// Solve alpha*W2*J0(beta*W1/nu1)*[J2+J0](gamma*W2/nu2) = +-sqrt((pi/tg)^2 -
// ((Dcz - nu2)/2)^2) for W2 on (0, omega_max]. Infeasible when
// |nu2 - Dcz| > 2*pi/tg; Unsolvable when no bracket exists in range.
AmplitudeSolution solve_optimal_amplitude(const DressedFrame& frame, double t_g,
                                          double omega_1, double nu_1, double nu_2,
                                          double omega_max = 0.0);

struct AnglePrediction {
    double theta = 0;         // rad, from sin(theta) = sin^2(g1*tg)
    double theta_linear = 0;  // rad, from theta = g1*tg (folded into [0, pi/2])
    double phi = 0;           // rad, wrapped to [-pi, pi)
    double g1 = 0, g2 = 0;    // rad/ns
};

// Eqs. of motion for the two concurrently driven transitions, with the drive-1
// frequency resonant with the iswap gap.
AnglePrediction predict_theta_phi(const DressedFrame& frame, double t_g,
                                  double omega_1, double nu_1, double nu_2,
                                  double omega_2);

struct ControlSolution {
    SolveStatus status = SolveStatus::Unsolvable;
    double nu_1 = 0, nu_2 = 0;       // rad/ns
    double omega_1 = 0, omega_2 = 0; // rad/ns
    double theta = 0, phi = 0;       // rad, predicted
    double g1 = 0, g2 = 0;           // rad/ns
    bool feasible() const { return status == SolveStatus::Found; }
};

// Invert the control laws for target angles: analytic (g1, nu2, g2) followed
// by an alternating pair of bracketed scalar solves for (Omega_1, Omega_2)
// to joint tolerance 1e-6.
ControlSolution invert_targets(const DressedFrame& frame, double t_g,
                               double theta_target, double phi_target,
                               double omega_max = 0.0);

// Idle ZZ cancellation: amplitude of a single far-off-resonant tone on qubit 2
// making the accumulated conditional phase vanish,
// g^2 - xi_zz*Delta = xi_zz^2/4 with Delta = Dcz - nu.
std::optional<double> idle_zz_cancel(const DressedFrame& frame, double nu,
                                     double omega_max = 0.0);

// ---------------------------------------------------------------------------
// Toy-model closed forms.
// ---------------------------------------------------------------------------

// Conditional phase and cycle time of the detuned two-level CPHASE:
// t_g = 2*pi/sqrt(D^2 + 4g^2), phi = pi*(1 - D/sqrt(D^2 + 4g^2)).
std::pair<double, double> toy_conditional_phase(double detuning_2lvl, double g);

// Weak-drive block reduction: the 10/01 exchange block with coupling
// g*J1(x1)*J0(x2) and the 11/02 block with coupling sqrt(2)*g*J0(x1)*J1(x2)
// and detuning -epsilon, x_k = Omega_k/nu_k.
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> toy_block_hamiltonians(const ToyParams& params);

}  // namespace cfsim
