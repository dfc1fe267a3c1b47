// cfsim: simulation and numerical-optimization toolkit for concurrent
// fSim two-qubit gates driven by bichromatic parametric drives.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "cfsim/csvio.hpp"
#include "cfsim/sweep.hpp"

namespace {

using namespace cfsim;
using nlohmann::ordered_json;

struct CliOptions {
    std::string config_path;
    std::string outdir = ".";
    std::string format;
    std::string integrator;
    int workers = 0;
    double dt = 0;
};

RunConfig load_config(const CliOptions& cli) {
    RunConfig cfg = parse_config(cli.config_path);
    if (cli.dt > 0) cfg.simulation.dt = cli.dt;
    if (cli.workers > 0) cfg.simulation.workers = cli.workers;
    if (!cli.integrator.empty()) {
        if (cli.integrator == "split") cfg.simulation.integrator = Integrator::SplitOperator;
        else if (cli.integrator == "expm") cfg.simulation.integrator = Integrator::DirectExpm;
        else throw ConfigError("--integrator expects split|expm");
    }
    if (!cli.format.empty()) {
        if (cli.format == "csv") cfg.format = OutputFormat::Csv;
        else if (cli.format == "json") cfg.format = OutputFormat::Json;
        else if (cli.format == "both") cfg.format = OutputFormat::Both;
        else throw ConfigError("--format expects csv|json|both");
    }
    for (const auto& d : cfg.filled_defaults)
        std::cerr << "config default: " << d << "\n";
    return cfg;
}

std::string label_of(const BasisIndex& b) {
    return std::to_string(b.q1) + std::to_string(b.q2) + std::to_string(b.r);
}

BasisIndex parse_label(const std::string& s, const ModeDims& dims) {
    if (s.size() != 3 || !isdigit(s[0]) || !isdigit(s[1]) || !isdigit(s[2]))
        throw ConfigError("state label must be three digits q1 q2 r, got '" + s + "'");
    return make_basis_index(s[0] - '0', s[1] - '0', s[2] - '0', dims);
}

void ensure_outdir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "'");
}

// --- subcommand bodies -----------------------------------------------------

int cmd_spectrum(const CliOptions& cli) {
    const RunConfig cfg = load_config(cli);
    const RunContext ctx = RunContext::create(cfg);
    ensure_outdir(cli.outdir);
    const int n = ctx.frame.dims.total();

    std::vector<std::vector<CsvCell>> rows;
    for (int f = 0; f < n; ++f) {
        const BasisIndex b = unflatten(f, ctx.frame.dims);
        const int col = ctx.frame.label_to_column[f];
        const bool ambiguous = std::find(ctx.frame.ambiguous_labels.begin(),
                                         ctx.frame.ambiguous_labels.end(),
                                         f) != ctx.frame.ambiguous_labels.end();
        rows.push_back({std::string(label_of(b)),
                        units::radns_to_ghz(ctx.frame.eigenvalues(col)),
                        ctx.frame.label_overlap[f], static_cast<long>(ambiguous)});
    }
    write_csv(cli.outdir + "/eigentable.csv", "cfsim.eigentable.v1",
              {"label", "freq_GHz", "overlap", "ambiguous"}, rows);

    rows.clear();
    for (int f = 0; f < n; ++f) {
        const BasisIndex b = unflatten(f, ctx.frame.dims);
        rows.push_back({std::string(label_of(b)),
                        ctx.frame.n_coeff(Mode::Q1, b.q1, b.q2, b.r),
                        ctx.frame.n_coeff(Mode::Q2, b.q1, b.q2, b.r),
                        ctx.frame.n_coeff(Mode::Coupler, b.q1, b.q2, b.r)});
    }
    write_csv(cli.outdir + "/ncoeffs.csv", "cfsim.ncoeffs.v1",
              {"label", "N1", "N2", "Nc"}, rows);

    rows.clear();
    for (Mode m : {Mode::Q1, Mode::Q2, Mode::Coupler}) {
        const Matrix& c = ctx.frame.c_coeffs[mode_index(m)];
        for (int fa = 0; fa < n; ++fa)
            for (int fb = fa + 1; fb < n; ++fb) {
                const BasisIndex a = unflatten(fa, ctx.frame.dims);
                const BasisIndex b = unflatten(fb, ctx.frame.dims);
                const Complex v = c(ctx.frame.column(a), ctx.frame.column(b));
                if (std::abs(v) > 1e-8)
                    rows.push_back({std::string(label_of(a)), std::string(label_of(b)),
                                    static_cast<long>(mode_index(m) + 1), v.real()});
            }
    }
    write_csv(cli.outdir + "/ccoeffs.csv", "cfsim.ccoeffs.v1",
              {"label_a", "label_b", "mode", "C"}, rows);
    std::cout << "spectrum tables written to " << cli.outdir << "\n";
    return 0;
}

int cmd_coupling(const CliOptions& cli) {
    const RunConfig cfg = load_config(cli);
    const RunContext ctx = RunContext::create(cfg);
    const ResolvedTones rt = resolve_tones(ctx, cfg.tones);
    if (rt.solved_amplitude && !rt.amplitude.feasible())
        throw ConfigError("tone-2 amplitude solve failed for this configuration");
    ensure_outdir(cli.outdir);

    const double w1 = rt.tones[0].amplitude, nu1 = rt.tones[0].frequency;
    const bool two = rt.tones.size() >= 2;
    const double w2 = two ? rt.tones[1].amplitude : 0.0;
    const double nu2 = two ? rt.tones[1].frequency : 1.0;

    const CouplingConstants c1 = coupling_constants(
        ctx.frame, ctx.frame.index(1, 0, 0), ctx.frame.index(0, 1, 0), Mode::Q1, Mode::Q2);
    const CouplingConstants c2 = coupling_constants(
        ctx.frame, ctx.frame.index(1, 1, 0), ctx.frame.index(0, 2, 0), Mode::Q2, Mode::Q1);
    const EffectiveCoupling g1 = g_crosstalk(c1, w1, nu1, w2, nu2);
    const EffectiveCoupling g2 = g_cphase(c2, w1, nu1, w2, nu2, cphase_gap(ctx.frame));

    std::vector<std::vector<CsvCell>> rows = {
        {std::string("100<->010"), c1.alpha, c1.beta, c1.gamma,
         units::radns_to_mhz(g1.magnitude), units::radns_to_mhz(g1.detuning),
         static_cast<long>(1)},
        {std::string("110<->020"), c2.alpha, c2.beta, c2.gamma,
         units::radns_to_mhz(g2.magnitude), units::radns_to_mhz(g2.detuning),
         static_cast<long>(1)},
    };
    write_csv(cli.outdir + "/coupling.csv", "cfsim.coupling.v1",
              {"transition", "alpha", "beta", "gamma", "g_MHz", "detuning_MHz", "feasible"},
              rows);
    std::cout << "g_100,010 = " << units::radns_to_mhz(g1.magnitude) << " MHz, "
              << "g_110,020 = " << units::radns_to_mhz(g2.magnitude) << " MHz\n";
    return 0;
}

int cmd_opt_amp(const CliOptions& cli) {
    const RunConfig cfg = load_config(cli);
    const RunContext ctx = RunContext::create(cfg);
    ensure_outdir(cli.outdir);
    const double w1 = cfg.tone(1).amplitude.value_or(0.0);
    const double nu1 = cfg.tone(1).frequency.value_or(iswap_gap(ctx.frame));

    std::vector<double> nu2_values;
    if (!cfg.sweep_axes.empty() && cfg.sweep_axes[0].path == "tone2.frequency") {
        for (int i = 0; i < cfg.sweep_axes[0].count; ++i)
            nu2_values.push_back(axis_value(cfg.sweep_axes[0], i));
    } else if (cfg.tones.size() >= 2 && cfg.tones[1].frequency) {
        nu2_values.push_back(*cfg.tones[1].frequency);
    } else {
        nu2_values.push_back(cphase_gap(ctx.frame));
    }

    std::vector<std::vector<CsvCell>> rows;
    for (double nu2 : nu2_values) {
        const AmplitudeSolution s =
            solve_optimal_amplitude(ctx.frame, ctx.t_g, w1, nu1, nu2);
        rows.push_back({units::radns_to_mhz(nu2),
                        s.feasible() ? units::radns_to_mhz(s.omega_2) : 0.0,
                        units::radns_to_mhz(s.g2_target),
                        static_cast<long>(s.feasible() ? 1 : 0)});
    }
    write_csv(cli.outdir + "/optamp.csv", "cfsim.optamp.v1",
              {"nu2_MHz", "omega2_MHz", "g2_MHz", "feasible"}, rows);
    std::cout << rows.size() << " amplitude solutions written\n";
    return 0;
}

int cmd_invert(const CliOptions& cli) {
    const RunConfig cfg = load_config(cli);
    if (!cfg.targets.set) throw ConfigError("invert needs targets.theta and targets.phi");
    const RunContext ctx = RunContext::create(cfg);
    ensure_outdir(cli.outdir);
    const ControlSolution sol =
        invert_targets(ctx.frame, ctx.t_g, cfg.targets.theta, cfg.targets.phi);

    std::vector<CsvCell> row = {
        units::rad_to_deg(cfg.targets.theta), units::rad_to_deg(cfg.targets.phi),
        static_cast<long>(sol.feasible() ? 1 : 0),
        units::radns_to_mhz(sol.nu_2), units::radns_to_mhz(sol.omega_1),
        units::radns_to_mhz(sol.omega_2), units::radns_to_mhz(sol.g1),
        units::radns_to_mhz(sol.g2)};
    // Numeric verification of the solved controls when feasible.
    double theta_num = 0, phi_num = 0, leak = 0, fid = 0;
    if (sol.feasible()) {
        ResolvedTones rt;
        DriveTone t1, t2;
        t1.target = Mode::Q1;
        t1.amplitude = sol.omega_1;
        t1.frequency = sol.nu_1;
        t2.target = Mode::Q2;
        t2.amplitude = sol.omega_2;
        t2.frequency = sol.nu_2;
        rt.tones = {t1, t2};
        const GateReport rep = run_gate_point(ctx, rt);
        theta_num = rep.theta;
        phi_num = rep.phi;
        leak = rep.leakage;
        fid = rep.fidelity;
    }
    row.push_back(units::rad_to_deg(theta_num));
    row.push_back(units::rad_to_deg(phi_num));
    row.push_back(leak);
    row.push_back(fid);
    write_csv(cli.outdir + "/invert.csv", "cfsim.invert.v1",
              {"theta_target_deg", "phi_target_deg", "feasible", "nu2_MHz", "omega1_MHz",
               "omega2_MHz", "g1_MHz", "g2_MHz", "theta_deg", "phi_deg", "leakage",
               "fidelity"},
              {row});
    std::cout << "control solution " << (sol.feasible() ? "found" : "infeasible") << "\n";
    return sol.feasible() ? 0 : 1;
}

int cmd_resonances(const CliOptions& cli) {
    const RunConfig cfg = load_config(cli);
    const RunContext ctx = RunContext::create(cfg);
    ensure_outdir(cli.outdir);
    std::vector<SeriesDrive> drives;
    for (size_t i = 0; i < cfg.tones.size(); ++i) {
        SeriesDrive d;
        d.target = cfg.tones[i].target;
        d.amplitude = cfg.tones[i].amplitude.value_or(0.0);
        d.frequency = cfg.tones[i].frequency.value_or(
            i == 0 ? iswap_gap(ctx.frame) : cphase_gap(ctx.frame));
        drives.push_back(d);
    }
    const auto hits =
        resonance_scan(ctx.frame, drives, cfg.analysis.max_photons, cfg.analysis.threshold);
    std::vector<std::vector<CsvCell>> rows;
    for (const auto& h : hits)
        rows.push_back({std::string(label_of(h.a)), std::string(label_of(h.b)),
                        static_cast<long>(h.n_r), static_cast<long>(h.n_1),
                        static_cast<long>(h.n_2), units::radns_to_mhz(h.residual)});
    write_csv(cli.outdir + "/resonances.csv", "cfsim.resonances.v1",
              {"label_a", "label_b", "n_r", "n_1", "n_2", "residual_MHz"}, rows);
    std::cout << rows.size() << " resonance hits\n";
    return 0;
}

int cmd_evolve(const CliOptions& cli) {
    const RunConfig cfg = load_config(cli);
    const RunContext ctx = RunContext::create(cfg);
    const ResolvedTones rt = resolve_tones(ctx, cfg.tones);
    if (rt.solved_amplitude && !rt.amplitude.feasible())
        throw ConfigError("tone-2 amplitude solve failed for this configuration");
    ensure_outdir(cli.outdir);

    const BasisIndex init = parse_label(cfg.simulation.initial, ctx.frame.dims);
    Matrix initial(ctx.frame.dims.total(), 1);
    initial.col(0) = ctx.frame.dressed_state(init.q1, init.q2, init.r);

    std::vector<TrackedState> trackers;
    for (const char* lbl : {"000", "010", "100", "110", "020", "200", "001"}) {
        try {
            const BasisIndex b = parse_label(lbl, ctx.frame.dims);
            trackers.push_back({lbl, ctx.frame.dressed_state(b.q1, b.q2, b.r)});
        } catch (const ConfigError&) {
            // label outside this truncation; skip
        }
    }
    PropagationOptions opts;
    opts.dt = ctx.dt;
    opts.method = ctx.integrator;
    const PropagationResult res =
        propagate(ctx.h0, make_channels(ctx.device, rt.tones), ctx.t_g, initial,
                  trackers, opts);

    std::vector<std::string> cols = {"time_ns"};
    for (const auto& t : trackers) cols.push_back("P_" + t.label);
    std::vector<std::vector<CsvCell>> rows;
    for (int s = 0; s < res.times.size(); ++s) {
        std::vector<CsvCell> row = {res.times(s)};
        for (size_t tr = 0; tr < trackers.size(); ++tr)
            row.emplace_back(res.traces[tr](s, 0));
        rows.push_back(std::move(row));
    }
    write_csv(cli.outdir + "/evolve.csv", "cfsim.evolve.v1", cols, rows);
    std::cout << "traces for initial |" << cfg.simulation.initial << "> written ("
              << res.times.size() << " samples)\n";
    return 0;
}

ordered_json report_json(const GateReport& rep) {
    ordered_json j;
    j["theta_deg"] = units::rad_to_deg(rep.theta);
    j["phi_deg"] = units::rad_to_deg(rep.phi);
    j["phi_full_dressed_deg"] = units::rad_to_deg(rep.phi_full_dressed);
    j["leakage"] = rep.leakage;
    j["fidelity"] = rep.fidelity;
    j["subspace_norm"] = rep.subspace_norm;
    j["single_qubit_phases_rad"] = rep.single_qubit_phases;
    if (rep.theta_predicted) {
        j["theta_pred_deg"] = units::rad_to_deg(*rep.theta_predicted);
        j["phi_pred_deg"] = units::rad_to_deg(*rep.phi_predicted);
        j["fidelity_vs_pred"] = *rep.fidelity_vs_predicted;
        j["theta_delta_deg"] = units::rad_to_deg(rep.theta - *rep.theta_predicted);
        j["phi_delta_deg"] =
            units::rad_to_deg(units::wrap_pi(rep.phi - *rep.phi_predicted));
    }
    return j;
}

int cmd_gate(const CliOptions& cli) {
    const RunConfig cfg = load_config(cli);
    const RunContext ctx = RunContext::create(cfg);
    const ResolvedTones rt = resolve_tones(ctx, cfg.tones);
    if (rt.solved_amplitude && !rt.amplitude.feasible())
        throw ConfigError("tone-2 amplitude solve failed for this configuration");
    ensure_outdir(cli.outdir);
    const GateReport rep = run_gate_point(ctx, rt);
    ordered_json j = report_json(rep);
    if (rt.solved_amplitude) j["omega2_MHz"] = units::radns_to_mhz(rt.tones[1].amplitude);
    if (rt.shaped) j["gamma"] = rt.pulse.gamma;
    std::ofstream out(cli.outdir + "/gate.json");
    if (!out) throw ConfigError("cannot write gate.json");
    out << j.dump() << "\n";
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_sweep(const CliOptions& cli) {
    const RunConfig cfg = load_config(cli);
    const auto records = run_sweep(cfg, cfg.simulation.workers);
    const auto files = emit_sweep(records, cfg, cli.outdir);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return 0;
}

int cmd_toy(const CliOptions& cli) {
    const RunConfig cfg = load_config(cli);
    const auto records = run_toy_sweep(cfg, cfg.simulation.workers);
    const auto files = emit_toy_sweep(records, cfg, cli.outdir);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return 0;
}

int cmd_zz_idle(const CliOptions& cli) {
    const RunConfig cfg = load_config(cli);
    const RunContext ctx = RunContext::create(cfg);
    ensure_outdir(cli.outdir);
    if (cfg.tones.size() < 2 || !cfg.tones[1].frequency)
        throw ConfigError("zz-idle needs an explicit tone2.frequency (the idle tone)");
    const double nu = *cfg.tones[1].frequency;
    const auto omega = idle_zz_cancel(ctx.frame, nu);

    std::vector<CsvCell> row = {units::radns_to_mhz(nu)};
    if (!omega) {
        row.insert(row.end(), {0.0, 0.0, 0.0, 0.0, static_cast<long>(0)});
        write_csv(cli.outdir + "/zzidle.csv", "cfsim.zzidle.v1",
                  {"nu_MHz", "omega_MHz", "t_cycle_ns", "phi_deg", "leakage", "feasible"},
                  {row});
        std::cout << "no cancellation amplitude in range\n";
        return 1;
    }
    // Verify with one propagation over a full cycle.
    const CouplingConstants cc = coupling_constants(
        ctx.frame, ctx.frame.index(1, 1, 0), ctx.frame.index(0, 2, 0), Mode::Q2, Mode::Q1);
    const double g = g_cphase(cc, 0.0, 1.0, *omega, nu, cphase_gap(ctx.frame)).magnitude;
    const double det = cphase_gap(ctx.frame) - nu;
    const double t_cycle = units::two_pi / std::sqrt(det * det + 4 * g * g);
    RunContext cycle_ctx = ctx;
    cycle_ctx.t_g = t_cycle;
    ResolvedTones rt;
    DriveTone tone;
    tone.target = Mode::Q2;
    tone.amplitude = *omega;
    tone.frequency = nu;
    rt.tones = {tone};
    const GateReport rep = run_gate_point(cycle_ctx, rt);
    row.insert(row.end(),
               {units::radns_to_mhz(*omega), t_cycle, units::rad_to_deg(rep.phi),
                rep.leakage, static_cast<long>(1)});
    write_csv(cli.outdir + "/zzidle.csv", "cfsim.zzidle.v1",
              {"nu_MHz", "omega_MHz", "t_cycle_ns", "phi_deg", "leakage", "feasible"},
              {row});
    std::cout << "omega = " << units::radns_to_mhz(*omega) << " MHz, residual phi = "
              << units::rad_to_deg(rep.phi) << " deg\n";
    return 0;
}

int cmd_pulse_opt(const CliOptions& cli) {
    const RunConfig cfg = load_config(cli);
    const RunContext ctx = RunContext::create(cfg);
    ensure_outdir(cli.outdir);
    if (cfg.tones.size() < 2) throw ConfigError("pulse-opt needs two tones");
    if (cfg.tones[1].envelope.kind != EnvelopeSpec::Kind::FlatTopGaussian)
        throw ConfigError("pulse-opt needs tone2.envelope = flattop");

    const ResolvedTones rt = resolve_tones(ctx, cfg.tones);
    if (rt.solved_amplitude && !rt.amplitude.feasible())
        throw ConfigError("tone-2 amplitude solve failed for this configuration");
    const GateReport shaped = run_gate_point(ctx, rt);

    // Matched rectangular baseline.
    ResolvedTones rect = rt;
    for (auto& t : rect.tones) t.envelope = EnvelopeSpec{};
    const GateReport flat = run_gate_point(ctx, rect);

    ordered_json j;
    j["schema"] = "cfsim.pulse-opt.v1";
    j["gamma"] = rt.pulse.gamma;
    j["gamma_at_boundary"] = rt.pulse.at_boundary;
    j["surrogate_leak"] = rt.pulse.surrogate_leak;
    j["shaped"] = report_json(shaped);
    j["rectangular"] = report_json(flat);
    j["infidelity_ratio"] =
        (1.0 - flat.fidelity) / std::max(1e-12, 1.0 - shaped.fidelity);
    std::ofstream out(cli.outdir + "/pulse_opt.json");
    if (!out) throw ConfigError("cannot write pulse_opt.json");
    out << j.dump(2) << "\n";
    std::cout << "gamma = " << rt.pulse.gamma << ", infidelity improvement x"
              << j["infidelity_ratio"].get<double>() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"concurrent fSim gate simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOptions cli;
    app.add_option("--config", cli.config_path, "run configuration file")->required();
    app.add_option("--out", cli.outdir, "output directory");
    app.add_option("--format", cli.format, "csv|json|both");
    app.add_option("--workers", cli.workers, "worker threads for sweeps");
    app.add_option("--dt", cli.dt, "integration step in ns");
    app.add_option("--integrator", cli.integrator, "split|expm");

    struct Sub { const char* name; const char* help; int (*fn)(const CliOptions&); };
    const Sub subs[] = {
        {"spectrum", "dressed eigentable and N/C coefficient tables", cmd_spectrum},
        {"coupling", "closed-form effective couplings for the configured tones", cmd_coupling},
        {"opt-amp", "leakage-minimizing tone-2 amplitude (scan over nu2 if configured)", cmd_opt_amp},
        {"invert", "solve controls for target angles and verify numerically", cmd_invert},
        {"resonances", "generalized resonance-condition scan", cmd_resonances},
        {"evolve", "population traces for one initial state", cmd_evolve},
        {"gate", "single gate run, one-line JSON report", cmd_gate},
        {"sweep", "grid sweep: solve amplitude, propagate, extract", cmd_sweep},
        {"toy", "two-qutrit toy model grid (BPD or DC+AC)", cmd_toy},
        {"zz-idle", "idle ZZ-cancellation amplitude and verification", cmd_zz_idle},
        {"pulse-opt", "flat-top envelope factor optimization and comparison", cmd_pulse_opt},
    };
    for (const auto& s : subs) app.add_subcommand(s.name, s.help);

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& s : subs)
            if (app.got_subcommand(s.name)) return s.fn(cli);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
