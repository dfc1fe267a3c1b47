#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cfsim/analytics.hpp"
#include "cfsim/spectrum.hpp"

namespace cfsim {

enum class Integrator { SplitOperator, DirectExpm };

// One parametric tone bound to the occupation diagonal of its target mode.
struct DriveChannel {
    Eigen::VectorXd occupation;
    DriveTone tone;
};

std::vector<DriveChannel> make_channels(const DeviceParams& device,
                                        const std::vector<DriveTone>& tones);

// Default integration step: resolves the fastest mode frequency with margin,
// capped at 1e-3 ns.
double default_dt(const DeviceParams& device);
double default_dt(double max_omega);

struct TrackedState {
    std::string label;
    Vector state;
};

struct PropagationOptions {
    double dt = 1e-3;                  // ns
    Integrator method = Integrator::SplitOperator;
    int trace_stride = 0;              // steps between samples; 0 -> ~2000 samples
    double unitarity_tol = 1e-6;       // hard failure threshold
};

struct PropagationResult {
    Matrix endpoint;                        // dim x k propagated columns
    std::vector<std::string> initial_labels;
    std::vector<std::string> tracker_labels;
    Eigen::VectorXd times;                  // ns
    // traces[tracker](sample, column) = |<tracker|psi_column(t)>|^2
    std::vector<Eigen::MatrixXd> traces;
    double max_unitarity_error = 0;
    double dt = 0;                          // actual uniform step used
    double t_g = 0;
    Integrator method = Integrator::SplitOperator;

    const Eigen::MatrixXd& trace(const std::string& tracker_label) const;
    int column_of(const std::string& initial_label) const;
};

// Evolve the given initial columns under H(t) = H0 + sum_j f_j(t) * diag_j,
// f_j(t) = amplitude * envelope(t) * sin(nu t + phase), with piecewise
// constant steps sampled at interval midpoints. The split-operator method
// precomputes exp(-i*H0*dt) spectrally and applies the diagonal drive as
// phase factors (Strang splitting, O(dt^2)); direct-expm rediagonalizes
// H(t_mid) every step and is kept as the validation path.
PropagationResult propagate(const Matrix& h0, const std::vector<DriveChannel>& drives,
                            double t_g, const Matrix& initial_columns,
                            const std::vector<TrackedState>& trackers,
                            const PropagationOptions& opts);

// Fully time-dependent variant for Hamiltonians that are not diagonal-driven
// (toy DC+AC model, interaction-picture frames). Always direct-expm.
PropagationResult propagate_tdep(const std::function<Matrix(double)>& hamiltonian,
                                 double t_g, const Matrix& initial_columns,
                                 const std::vector<TrackedState>& trackers,
                                 const PropagationOptions& opts);

// 1 - mean over the requested initial columns of the final population inside
// the given computational states.
double leakage(const PropagationResult& result,
               const std::vector<Vector>& computational_states,
               const std::vector<std::string>& initial_labels);

// Computational-subspace leakage of a gate run: initial states 010, 100, 110,
// final population within {000, 010, 100, 110} (dressed).
double computational_leakage(const PropagationResult& result, const DressedFrame& frame);

// Least-squares fit of A*sin^2(omega*t) + c to an oscillatory trace.
struct RabiFit {
    double omega = 0;      // rad/ns
    double amplitude = 0;
    double offset = 0;
    double sse = 0;
};
RabiFit rabi_fit(const Eigen::VectorXd& times, const Eigen::VectorXd& values);

// Amplitude factor for a shaped CPHASE tone: propagates the effective
// two-level system spanned by {110, 020} under the instantaneous-envelope
// coupling law and minimizes the end-of-gate population left in 020 over
// scale factors in [0.5, 3].
struct PulseFactorResult {
    double gamma = 1.0;
    double surrogate_leak = 0;
    bool at_boundary = false;
};
PulseFactorResult optimize_pulse_factor(const DressedFrame& frame, double t_g,
                                        const DriveTone& tone_1, const DriveTone& tone_2);

}  // namespace cfsim
