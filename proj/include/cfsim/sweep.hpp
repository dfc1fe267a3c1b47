#pragma once

#include "cfsim/config.hpp"
#include "cfsim/gate.hpp"

namespace cfsim {

// Immutable per-run data shared by all sweep workers.
struct RunContext {
    DeviceParams device;
    Matrix h0;
    DressedFrame frame;
    double t_g = 0;
    double dt = 0;
    Integrator integrator = Integrator::SplitOperator;

    static RunContext create(const RunConfig& config);
};

// Concrete tones for one grid point after auto-resolution.
struct ResolvedTones {
    std::vector<DriveTone> tones;
    AmplitudeSolution amplitude;        // how tone-2 amplitude was obtained
    PulseFactorResult pulse;            // scale factor when tone 2 is shaped
    bool solved_amplitude = false;
    bool shaped = false;
};

// Snap auto frequencies to the driven transitions, solve the tone-2 amplitude
// when requested, and optimize the envelope factor for shaped tones.
ResolvedTones resolve_tones(const RunContext& ctx, const std::vector<ToneConfig>& tones);

// One full numeric gate evaluation: propagate the four computational columns
// and extract the report, with the analytic prediction alongside.
GateReport run_gate_point(const RunContext& ctx, const ResolvedTones& tones);

struct SweepRecord {
    std::vector<double> axis_values;   // internal units, axis order
    bool feasible = false;
    std::string error;
    double omega_2 = 0;                // rad/ns
    double gamma = 1.0;
    double theta_pred = 0, theta_pred_linear = 0, phi_pred = 0;  // rad
    double g1 = 0, g2 = 0;             // rad/ns
    double theta = 0, phi = 0;         // rad
    double leakage = 0, fidelity = 0, fidelity_vs_pred = 0;
};

// Row-major grid over the configured axes (a single point when none are
// configured). Grid points are dispatched to `workers` threads; per-point
// failures are recorded in the record, never aborting the sweep. Output
// ordering is grid order, independent of the worker count.
std::vector<SweepRecord> run_sweep(const RunConfig& config, int workers = 0);

// Toy-model grid (BPD or DC+AC): end-of-gate population, angles and leakage.
struct ToyRecord {
    std::vector<double> axis_values;
    std::string error;
    double p11 = 0;
    double theta = 0, phi = 0;  // rad
    double leakage = 0;
};
std::vector<ToyRecord> run_toy_sweep(const RunConfig& config, int workers = 0);

// CSV + JSON emission; returns the list of files written.
std::vector<std::string> emit_sweep(const std::vector<SweepRecord>& records,
                                    const RunConfig& config, const std::string& outdir);
std::vector<std::string> emit_toy_sweep(const std::vector<ToyRecord>& records,
                                        const RunConfig& config, const std::string& outdir);

// Grid helper: value of axis `ax` at index i (centred single value for
// count == 1).
double axis_value(const SweepAxis& ax, int i);

}  // namespace cfsim
