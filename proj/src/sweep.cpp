#include "cfsim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "cfsim/csvio.hpp"
#include "cfsim/units.hpp"

namespace cfsim {

namespace {

double to_mhz(double w) { return units::radns_to_mhz(w); }
double to_deg(double r) { return units::rad_to_deg(r); }

}  // namespace

RunContext RunContext::create(const RunConfig& config) {
    RunContext ctx;
    ctx.device = config.require_device();
    ctx.h0 = build_rwa_hamiltonian(ctx.device);
    ctx.frame = diagonalize(ctx.h0, ctx.device);
    ctx.t_g = config.simulation.t_g;
    ctx.dt = config.simulation.dt.value_or(default_dt(ctx.device));
    ctx.integrator = config.simulation.integrator;
    return ctx;
}

ResolvedTones resolve_tones(const RunContext& ctx, const std::vector<ToneConfig>& tones) {
    if (tones.empty()) throw ConfigError("at least one tone is required");
    ResolvedTones out;
    for (size_t i = 0; i < tones.size(); ++i) {
        const ToneConfig& tc = tones[i];
        DriveTone t;
        t.target = tc.target;
        t.phase = tc.phase;
        t.envelope = tc.envelope.resolved(ctx.t_g);
        t.frequency = tc.frequency.value_or(i == 0 ? iswap_gap(ctx.frame)
                                                   : cphase_gap(ctx.frame));
        if (tc.amplitude) {
            t.amplitude = *tc.amplitude;
        } else if (i == 1) {
            const double w1 = tones[0].amplitude.value_or(0.0);
            const double nu1 = out.tones[0].frequency;
            out.amplitude = solve_optimal_amplitude(ctx.frame, ctx.t_g, w1, nu1, t.frequency);
            out.solved_amplitude = true;
            if (!out.amplitude.feasible()) {
                out.tones.push_back(t);
                return out;  // caller records infeasibility
            }
            t.amplitude = out.amplitude.omega_2;
        } else {
            throw ConfigError("tone 1 amplitude cannot be auto");
        }
        out.tones.push_back(t);
    }
    // Shaped CPHASE tone: optimize the envelope factor in the two-level
    // surrogate before the full propagation.
    if (out.tones.size() >= 2 &&
        out.tones[1].envelope.kind == EnvelopeSpec::Kind::FlatTopGaussian) {
        out.shaped = true;
        out.pulse = optimize_pulse_factor(ctx.frame, ctx.t_g, out.tones[0], out.tones[1]);
        out.tones[1].envelope.scale = out.pulse.gamma;
    }
    return out;
}

GateReport run_gate_point(const RunContext& ctx, const ResolvedTones& rt) {
    const auto channels = make_channels(ctx.device, rt.tones);
    PropagationOptions opts;
    opts.dt = ctx.dt;
    opts.method = ctx.integrator;
    opts.trace_stride = 1 << 30;  // endpoint only
    const Matrix initial = computational_columns(ctx.frame);
    PropagationResult result =
        propagate(ctx.h0, channels, ctx.t_g, initial, {}, opts);
    result.initial_labels = {"000", "010", "100", "110"};

    std::optional<ControlSolution> predicted;
    if (rt.tones.size() >= 2) {
        const AnglePrediction p =
            predict_theta_phi(ctx.frame, ctx.t_g, rt.tones[0].amplitude,
                              rt.tones[0].frequency, rt.tones[1].frequency,
                              rt.tones[1].amplitude);
        ControlSolution cs;
        cs.status = SolveStatus::Found;
        cs.nu_1 = rt.tones[0].frequency;
        cs.nu_2 = rt.tones[1].frequency;
        cs.omega_1 = rt.tones[0].amplitude;
        cs.omega_2 = rt.tones[1].amplitude;
        cs.theta = p.theta;
        cs.phi = p.phi;
        cs.g1 = p.g1;
        cs.g2 = p.g2;
        predicted = cs;
    }
    return gate_report(result, ctx.frame, predicted);
}

double axis_value(const SweepAxis& ax, int i) {
    if (ax.count == 1) return ax.start;
    return ax.start + (ax.stop - ax.start) * i / (ax.count - 1);
}

namespace {

// Row-major iteration over up to two axes; a configuration without axes is a
// single-point grid.
struct Grid {
    std::vector<SweepAxis> axes;
    int n1 = 1, n2 = 1;

    explicit Grid(const std::vector<SweepAxis>& a) : axes(a) {
        if (axes.size() > 0) n1 = axes[0].count;
        if (axes.size() > 1) n2 = axes[1].count;
    }
    int size() const { return n1 * n2; }
    std::vector<double> values(int idx) const {
        std::vector<double> v;
        if (!axes.empty()) v.push_back(axis_value(axes[0], idx / n2));
        if (axes.size() > 1) v.push_back(axis_value(axes[1], idx % n2));
        return v;
    }
};

template <typename Record, typename Eval>
std::vector<Record> run_grid(const Grid& grid, int workers, Eval eval) {
    const int n = grid.size();
    std::vector<Record> records(n);
    if (workers < 1) workers = 1;
    workers = std::min(workers, n);
    if (workers == 1) {
        for (int i = 0; i < n; ++i) records[i] = eval(i);
        return records;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) break;
                records[i] = eval(i);
            }
        });
    for (auto& th : pool) th.join();
    return records;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const RunConfig& config, int workers) {
    const RunContext ctx = RunContext::create(config);
    const Grid grid(config.sweep_axes);
    if (workers <= 0) workers = config.simulation.workers;

    auto eval = [&](int idx) {
        SweepRecord rec;
        rec.axis_values = grid.values(idx);
        try {
            RunConfig point = config;
            for (size_t a = 0; a < grid.axes.size(); ++a)
                apply_sweep_value(point, grid.axes[a].path, rec.axis_values[a]);
            const ResolvedTones rt = resolve_tones(ctx, point.tones);
            if (rt.solved_amplitude && !rt.amplitude.feasible()) {
                rec.error = rt.amplitude.status == SolveStatus::Infeasible
                                ? "infeasible: |nu2 - Delta_110,020| > 2*pi/t_g"
                                : "no amplitude root in range";
                return rec;
            }
            rec.feasible = true;
            if (rt.tones.size() >= 2) {
                rec.omega_2 = rt.tones[1].amplitude;
                rec.gamma = rt.shaped ? rt.pulse.gamma : 1.0;
                if (rt.shaped && rt.pulse.at_boundary)
                    rec.error = "warn: pulse factor at scan boundary";
            }
            const GateReport rep = run_gate_point(ctx, rt);
            rec.theta = rep.theta;
            rec.phi = rep.phi;
            rec.leakage = rep.leakage;
            rec.fidelity = rep.fidelity;
            if (rep.theta_predicted) {
                rec.theta_pred = *rep.theta_predicted;
                rec.phi_pred = *rep.phi_predicted;
                rec.fidelity_vs_pred = *rep.fidelity_vs_predicted;
            }
            if (rt.tones.size() >= 2) {
                const AnglePrediction p = predict_theta_phi(
                    ctx.frame, ctx.t_g, rt.tones[0].amplitude, rt.tones[0].frequency,
                    rt.tones[1].frequency, rt.tones[1].amplitude);
                rec.theta_pred_linear = p.theta_linear;
                rec.g1 = p.g1;
                rec.g2 = p.g2;
            }
        } catch (const std::exception& e) {
            rec.feasible = false;
            rec.error = e.what();
        }
        return rec;
    };
    return run_grid<SweepRecord>(grid, workers, eval);
}

std::vector<ToyRecord> run_toy_sweep(const RunConfig& config, int workers) {
    if (!config.toy.set) throw ConfigError("this command needs a [toy.*] section");
    const Grid grid(config.sweep_axes);
    if (workers <= 0) workers = config.simulation.workers;
    const double t_g = config.simulation.t_g;
    const double dt = config.simulation.dt.value_or(1e-3);

    auto eval = [&](int idx) {
        ToyRecord rec;
        rec.axis_values = grid.values(idx);
        try {
            RunConfig point = config;
            for (size_t a = 0; a < grid.axes.size(); ++a)
                apply_sweep_value(point, grid.axes[a].path, rec.axis_values[a]);
            ToyParams p = point.toy.params;
            if (point.toy.drive1_freq_auto) p.drive1.frequency = std::abs(p.Delta);
            if (point.toy.drive2_freq_auto) p.drive2.frequency = std::abs(p.cphase_gap());

            Matrix initial = Matrix::Zero(5, 3);  // columns |01>, |10>, |11>
            initial(0, 0) = initial(1, 1) = initial(2, 2) = 1.0;
            PropagationOptions opts;
            opts.dt = dt;
            opts.trace_stride = 1 << 30;
            PropagationResult result;
            if (point.toy.model == ToyModelKind::DcAc) {
                result = propagate_tdep(
                    [&](double t) { return build_toy_dc_ac_hamiltonian(p, t); }, t_g,
                    initial, {}, opts);
            } else {
                ToyParams undriven = p;
                undriven.drive1.amplitude = undriven.drive2.amplitude = 0;
                const Matrix h0 = build_toy_hamiltonian(undriven, 0.0);
                Eigen::VectorXd occ1(5), occ2(5);
                occ1 << 0, 1, 1, 0, 2;
                occ2 << 1, 0, 1, 2, 0;
                std::vector<DriveChannel> channels;
                DriveTone t1, t2;
                t1.amplitude = p.drive1.amplitude;
                t1.frequency = p.drive1.frequency > 0 ? p.drive1.frequency : 1.0;
                t2.amplitude = p.drive2.amplitude;
                t2.frequency = p.drive2.frequency > 0 ? p.drive2.frequency : 1.0;
                channels.push_back({occ1, t1});
                channels.push_back({occ2, t2});
                result = propagate(h0, channels, t_g, initial, {}, opts);
            }
            result.initial_labels = {"01", "10", "11"};

            // Computational unitary embedded at (00, 01, 10, 11) with the
            // uncoupled |00> as phase reference; free one-excitation phases
            // removed (E_01 = 0, E_10 = E_11 = Delta for the BPD model).
            ComputationalUnitary m;
            m.matrix = Eigen::Matrix4cd::Zero();
            m.matrix(0, 0) = 1.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) m.matrix(1 + i, 1 + j) = result.endpoint(i, j);
            if (point.toy.model == ToyModelKind::Bpd) {
                const Complex iu(0, 1);
                Eigen::Vector4cd undo;
                undo << 1.0, 1.0, std::exp(iu * p.Delta * t_g), std::exp(iu * p.Delta * t_g);
                m.matrix = undo.asDiagonal() * m.matrix;
            }
            m.subspace_norm = (m.matrix * m.matrix.adjoint()).trace().real();
            rec.p11 = std::norm(result.endpoint(2, 2));
            std::vector<Vector> comp(3, Vector::Zero(5));
            comp[0](0) = comp[1](1) = comp[2](2) = 1.0;
            rec.leakage = leakage(result, comp, {"01", "10", "11"});
            const ExtractedAngles angles = extract_angles(m);
            rec.theta = angles.theta;
            rec.phi = angles.phi;
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
        return rec;
    };
    return run_grid<ToyRecord>(grid, workers, eval);
}

namespace {

std::vector<std::string> axis_columns(const RunConfig& config, const std::string& unit) {
    std::vector<std::string> cols;
    for (size_t a = 0; a < config.sweep_axes.size(); ++a) {
        std::string name = config.sweep_axes[a].path;
        for (char& ch : name)
            if (ch == '.') ch = '_';
        cols.push_back(name + "_" + unit);
    }
    return cols;
}

nlohmann::ordered_json stats_of(std::vector<double> v) {
    nlohmann::ordered_json j;
    if (v.empty()) return j;
    double mn = v[0], mx = v[0], sum = 0;
    for (double x : v) {
        mn = std::min(mn, x);
        mx = std::max(mx, x);
        sum += x;
    }
    j["min"] = mn;
    j["max"] = mx;
    j["mean"] = sum / v.size();
    return j;
}

}  // namespace

std::vector<std::string> emit_sweep(const std::vector<SweepRecord>& records,
                                    const RunConfig& config, const std::string& outdir) {
    if (records.empty()) throw ConfigError("no records to emit");
    std::filesystem::create_directories(outdir);
    std::vector<std::string> written;

    if (config.format != OutputFormat::Json) {
        std::vector<std::string> cols = axis_columns(config, "MHz");
        for (const char* c : {"feasible", "omega2_MHz", "gamma", "theta_pred_deg",
                              "theta_pred_lin_deg", "phi_pred_deg", "g1_MHz", "g2_MHz",
                              "theta_deg", "phi_deg", "leakage", "fidelity",
                              "fidelity_vs_pred", "error"})
            cols.push_back(c);
        std::vector<std::vector<CsvCell>> rows;
        for (const auto& r : records) {
            std::vector<CsvCell> row;
            for (double v : r.axis_values) row.emplace_back(to_mhz(v));
            row.emplace_back(static_cast<long>(r.feasible ? 1 : 0));
            row.emplace_back(to_mhz(r.omega_2));
            row.emplace_back(r.gamma);
            row.emplace_back(to_deg(r.theta_pred));
            row.emplace_back(to_deg(r.theta_pred_linear));
            row.emplace_back(to_deg(r.phi_pred));
            row.emplace_back(to_mhz(r.g1));
            row.emplace_back(to_mhz(r.g2));
            row.emplace_back(to_deg(r.theta));
            row.emplace_back(to_deg(r.phi));
            row.emplace_back(r.leakage);
            row.emplace_back(r.fidelity);
            row.emplace_back(r.fidelity_vs_pred);
            row.emplace_back(r.error);
            rows.push_back(std::move(row));
        }
        const std::string path = outdir + "/sweep.csv";
        write_csv(path, "cfsim.sweep.v1", cols, rows);
        written.push_back(path);
    }

    if (config.format != OutputFormat::Csv) {
        nlohmann::ordered_json j;
        j["schema"] = "cfsim.sweep-summary.v1";
        j["points"] = records.size();
        int feasible = 0;
        std::vector<double> fid, leak;
        for (const auto& r : records)
            if (r.feasible && r.error.empty()) {
                ++feasible;
                fid.push_back(r.fidelity);
                leak.push_back(r.leakage);
            }
        j["feasible_points"] = feasible;
        j["fidelity"] = stats_of(fid);
        j["leakage"] = stats_of(leak);
        nlohmann::ordered_json axes = nlohmann::ordered_json::array();
        for (const auto& ax : config.sweep_axes) {
            nlohmann::ordered_json a;
            a["path"] = ax.path;
            a["start_MHz"] = to_mhz(ax.start);
            a["stop_MHz"] = to_mhz(ax.stop);
            a["count"] = ax.count;
            axes.push_back(a);
        }
        j["axes"] = axes;
        j["t_g_ns"] = config.simulation.t_g;
        const std::string path = outdir + "/summary.json";
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot write output file '" + path + "'");
        out << j.dump(2) << "\n";
        written.push_back(path);
    }
    return written;
}

std::vector<std::string> emit_toy_sweep(const std::vector<ToyRecord>& records,
                                        const RunConfig& config, const std::string& outdir) {
    if (records.empty()) throw ConfigError("no records to emit");
    std::filesystem::create_directories(outdir);
    std::vector<std::string> cols = axis_columns(config, "MHz");
    for (const char* c : {"p11", "theta_deg", "phi_deg", "leakage", "error"})
        cols.push_back(c);
    std::vector<std::vector<CsvCell>> rows;
    for (const auto& r : records) {
        std::vector<CsvCell> row;
        for (double v : r.axis_values) row.emplace_back(to_mhz(v));
        row.emplace_back(r.p11);
        row.emplace_back(to_deg(r.theta));
        row.emplace_back(to_deg(r.phi));
        row.emplace_back(r.leakage);
        row.emplace_back(r.error);
        rows.push_back(std::move(row));
    }
    const std::string path = outdir + "/toy.csv";
    write_csv(path, "cfsim.toy.v1", cols, rows);
    return {path};
}

}  // namespace cfsim
