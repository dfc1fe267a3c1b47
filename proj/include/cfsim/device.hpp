#pragma once

#include <optional>

#include "cfsim/basis.hpp"
#include "cfsim/errors.hpp"
#include "cfsim/units.hpp"

namespace cfsim {

// Undriven transmon-coupler-transmon model: mode frequencies, anharmonicities
// and exchange couplings, plus the truncation of each mode. All angular
// frequencies in rad/ns.
struct DeviceParams {
    double omega_1 = 0, omega_2 = 0, omega_c = 0;   // mode frequencies
    double delta_1 = 0, delta_2 = 0, delta_c = 0;   // anharmonicities
    double g_1c = 0, g_2c = 0, g_12 = 0;            // couplings
    int dim_1 = 0, dim_2 = 0, dim_c = 0;            // levels per mode
    int dim_cap = 200;                              // total-dimension cap

    ModeDims dims() const { return ModeDims{dim_1, dim_2, dim_c}; }

    double omega(Mode m) const {
        switch (m) {
            case Mode::Q1: return omega_1;
            case Mode::Q2: return omega_2;
            case Mode::Coupler: return omega_c;
        }
        throw ConfigError("invalid mode");
    }

    void validate() const;

    double max_mode_frequency() const;
};

// The device of the reference simulations: omega/2pi = 7.15, 7.6, 8.5 GHz,
// delta/2pi = -200, -200, 0 MHz, g/2pi = 120, 120, 0 MHz, dims 5, 5, 4.
DeviceParams paper_device();

// Pulse envelope. Rectangular is 1 on [0, t_g]. The flat-top Gaussian rises
// on [0, tau1], holds 1 on [tau1, tau1+tau2] and falls on the mirror, with
// Gaussian shoulders of width sigma; total duration 2*tau1 + tau2 must equal
// the gate time. `scale` is the optimization factor applied on top.
struct EnvelopeSpec {
    enum class Kind { Rectangular, FlatTopGaussian };

    Kind kind = Kind::Rectangular;
    double tau1 = 10.0;    // ns
    double tau2 = -1.0;    // ns; < 0 means fill to t_g - 2*tau1
    double sigma = 5.0;    // ns
    double scale = 1.0;    // dimensionless optimization factor

    EnvelopeSpec resolved(double t_g) const;
    void validate(double t_g) const;
    double value(double t, double t_g) const;
};

// One parametric tone Omega*sin(nu*t + phase) acting as a modulation of the
// target mode's frequency (a time-dependent number operator).
struct DriveTone {
    Mode target = Mode::Q1;
    double amplitude = 0;   // rad/ns
    double frequency = 0;   // rad/ns
    double phase = 0;       // rad
    EnvelopeSpec envelope{};

    void validate(const DeviceParams& device) const;

    // Instantaneous modulation amplitude at time t.
    double value(double t, double t_g) const {
        return amplitude * envelope.value(t, t_g) *
               std::sin(frequency * t + phase);
    }
};

}  // namespace cfsim
