#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfsim/device.hpp"
#include "cfsim/dynamics.hpp"
#include "cfsim/model.hpp"

namespace cfsim {

// One parametric tone as configured; `amplitude` or `frequency` may be left
// to the pipeline ("auto"): the frequency snaps to the transition the tone
// drives, and an auto amplitude on tone 2 is solved for minimal leakage.
struct ToneConfig {
    Mode target = Mode::Q1;
    std::optional<double> amplitude;   // rad/ns; nullopt = auto (tone 2 only)
    std::optional<double> frequency;   // rad/ns; nullopt = auto
    double phase = 0;                  // rad
    EnvelopeSpec envelope{};
};

struct SweepAxis {
    std::string path;       // e.g. "tone1.amplitude"
    double start = 0;       // internal units (rad/ns)
    double stop = 0;
    int count = 1;
};

enum class OutputFormat { Csv, Json, Both };

struct SimulationConfig {
    double t_g = 100.0;                 // ns
    std::optional<double> dt;           // ns; nullopt = default rule
    Integrator integrator = Integrator::SplitOperator;
    std::string initial = "110";        // initial label for trace dumps
    int workers = 1;
};

struct TargetConfig {
    double theta = 0;   // rad
    double phi = 0;     // rad
    bool set = false;
};

enum class ToyModelKind { Bpd, DcAc };

struct ToyConfig {
    ToyModelKind model = ToyModelKind::Bpd;
    ToyParams params{};
    bool drive1_freq_auto = false;   // snap to the 01-10 detuning
    bool drive2_freq_auto = false;   // snap to the 11-02 detuning
    bool set = false;
};

struct AnalysisConfig {
    int max_photons = 2;
    double threshold = units::mhz_to_radns(5.0);  // resonance residual cut
};

// Parsed, unit-converted and validated run configuration. Frequencies are
// accepted as ordinary frequencies with an explicit GHz/MHz/kHz suffix (as
// quoted in hardware tables) and stored as angular rad/ns; times carry
// ns/us suffixes; angles rad/deg. A dimensioned value without a unit suffix
// is an error, never a guess.
struct RunConfig {
    std::optional<DeviceParams> device;
    std::vector<ToneConfig> tones;
    SimulationConfig simulation{};
    std::vector<SweepAxis> sweep_axes;
    TargetConfig targets{};
    ToyConfig toy{};
    AnalysisConfig analysis{};
    OutputFormat format = OutputFormat::Both;
    std::vector<std::string> filled_defaults;  // validation-report echo

    const DeviceParams& require_device() const;
    const ToneConfig& tone(int index) const;  // 1-based, validated
};

RunConfig parse_config(const std::string& path);

// The resolvable sweep-axis parameter paths.
bool sweep_path_known(const std::string& path);
void apply_sweep_value(RunConfig& config, const std::string& path, double value);

}  // namespace cfsim
