#include "cfsim/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "cfsim/bessel.hpp"
#include "cfsim/kernels.hpp"
#include "cfsim/rootfind.hpp"
#include "cfsim/units.hpp"

namespace cfsim {

std::vector<DriveChannel> make_channels(const DeviceParams& device,
                                        const std::vector<DriveTone>& tones) {
    std::vector<DriveChannel> channels;
    channels.reserve(tones.size());
    for (const auto& t : tones) {
        t.validate(device);
        channels.push_back({occupation_diagonal(device, t.target), t});
    }
    return channels;
}

double default_dt(double max_omega) {
    return std::min(1e-3, 1.0 / (40.0 * max_omega));
}

double default_dt(const DeviceParams& device) {
    return default_dt(device.max_mode_frequency());
}

const Eigen::MatrixXd& PropagationResult::trace(const std::string& tracker_label) const {
    for (size_t i = 0; i < tracker_labels.size(); ++i)
        if (tracker_labels[i] == tracker_label) return traces[i];
    throw LabelError("no trace recorded for '" + tracker_label + "'");
}

int PropagationResult::column_of(const std::string& initial_label) const {
    for (size_t i = 0; i < initial_labels.size(); ++i)
        if (initial_labels[i] == initial_label) return static_cast<int>(i);
    throw LabelError("no initial column labelled '" + initial_label + "'");
}

namespace {

struct SplitBlock {
    std::vector<double> re, im;
    int n = 0, k = 0;

    void from(const Matrix& m) {
        n = static_cast<int>(m.rows());
        k = static_cast<int>(m.cols());
        re.assign(static_cast<size_t>(n) * k, 0.0);
        im.assign(static_cast<size_t>(n) * k, 0.0);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < k; ++c) {
                re[static_cast<size_t>(i) * k + c] = m(i, c).real();
                im[static_cast<size_t>(i) * k + c] = m(i, c).imag();
            }
    }

    Matrix to_matrix(int cols) const {
        Matrix m(n, cols);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < cols; ++c)
                m(i, c) = Complex(re[static_cast<size_t>(i) * k + c],
                                  im[static_cast<size_t>(i) * k + c]);
        return m;
    }
};

// Recording shared by the stepping schemes.
struct Recorder {
    const std::vector<TrackedState>& trackers;
    int n_cols;
    PropagationResult& out;
    std::vector<double> times;
    std::vector<std::vector<double>> rows;  // per tracker, flattened samples

    Recorder(const std::vector<TrackedState>& trk, int k, PropagationResult& out_)
        : trackers(trk), n_cols(k), out(out_) {
        rows.resize(trackers.size());
    }

    void sample(double t, const Matrix& state) {
        times.push_back(t);
        for (size_t tr = 0; tr < trackers.size(); ++tr) {
            for (int c = 0; c < n_cols; ++c) {
                const Complex a = trackers[tr].state.adjoint() * state.col(c);
                rows[tr].push_back(std::norm(a));
            }
        }
    }

    void finish() {
        out.times = Eigen::Map<Eigen::VectorXd>(times.data(), times.size());
        out.traces.clear();
        const int n_samples = static_cast<int>(times.size());
        for (size_t tr = 0; tr < trackers.size(); ++tr) {
            Eigen::MatrixXd m(n_samples, n_cols);
            for (int s = 0; s < n_samples; ++s)
                for (int c = 0; c < n_cols; ++c)
                    m(s, c) = rows[tr][static_cast<size_t>(s) * n_cols + c];
            out.traces.push_back(std::move(m));
            out.tracker_labels.push_back(trackers[tr].label);
        }
    }
};

double isometry_error(const Matrix& b) {
    const Matrix g = b.adjoint() * b;
    return (g - Matrix::Identity(g.rows(), g.cols())).norm();
}

int pick_stride(int n_steps, int requested) {
    if (requested > 0) return requested;
    return std::max(1, n_steps / 2000);
}

double drive_value(const DriveChannel& ch, double t, double t_g) {
    return ch.tone.value(t, t_g);
}

PropagationResult propagate_split(const Matrix& h0, const std::vector<DriveChannel>& drives,
                                  double t_g, const Matrix& initial_columns,
                                  const std::vector<TrackedState>& trackers,
                                  const PropagationOptions& opts) {
    const int n = static_cast<int>(h0.rows());
    const int k = static_cast<int>(initial_columns.cols());
    const int n_steps = std::max(1, static_cast<int>(std::llround(t_g / opts.dt)));
    const double dt = t_g / n_steps;
    const int stride = pick_stride(n_steps, opts.trace_stride);

    Eigen::SelfAdjointEigenSolver<Matrix> es(h0);
    if (es.info() != Eigen::Success) throw IntegrationError("H0 eigendecomposition failed");
    const Eigen::VectorXd evals = es.eigenvalues();
    Matrix phases(n, 1);
    for (int i = 0; i < n; ++i)
        phases(i, 0) = std::exp(Complex(0, -evals(i) * dt));
    const Matrix e0 = es.eigenvectors() * phases.col(0).asDiagonal() *
                      es.eigenvectors().adjoint();

    // Pad narrow blocks to four columns so the vectorized path always runs;
    // single columns use the dedicated dot-product kernel instead.
    const int kp = k == 1 ? 1 : std::max(k, 4);
    Matrix state_padded = Matrix::Zero(n, kp);
    state_padded.leftCols(k) = initial_columns;

    SplitBlock a, b, c;
    a.from(e0);
    b.from(state_padded);
    c.from(state_padded);

    // Per-channel integer occupations and phase power tables. The half-step
    // diagonal factor for basis state i is prod_j exp(-i*f_j*dt/2)^occ_j(i).
    std::vector<std::vector<int>> occ(drives.size());
    int max_occ = 0;
    for (size_t j = 0; j < drives.size(); ++j) {
        occ[j].resize(n);
        for (int i = 0; i < n; ++i) {
            occ[j][i] = static_cast<int>(std::llround(drives[j].occupation(i)));
            max_occ = std::max(max_occ, occ[j][i]);
        }
    }
    std::vector<std::vector<Complex>> pow_table(drives.size(),
                                                std::vector<Complex>(max_occ + 1));
    std::vector<double> pr(n), pi(n);

    const auto& kern = kernels::active_kernels();

    PropagationResult out;
    out.t_g = t_g;
    out.dt = dt;
    out.method = Integrator::SplitOperator;
    Recorder rec(trackers, k, out);

    double max_err = 0;
    auto check_unitarity = [&](int step) {
        const Matrix cur = b.to_matrix(k);
        max_err = std::max(max_err, isometry_error(cur));
        if (max_err > opts.unitarity_tol)
            throw IntegrationError("unitarity drift " + std::to_string(max_err) +
                                   " at step " + std::to_string(step) +
                                   "; reduce dt");
    };

    for (int s = 0; s < n_steps; ++s) {
        if (s % stride == 0) rec.sample(s * dt, b.to_matrix(k));
        const double t_mid = (s + 0.5) * dt;
        for (size_t j = 0; j < drives.size(); ++j) {
            const double f = drive_value(drives[j], t_mid, t_g);
            const Complex base = std::exp(Complex(0, -0.5 * f * dt));
            auto& tab = pow_table[j];
            tab[0] = Complex(1, 0);
            for (int q = 1; q <= max_occ; ++q) tab[q] = tab[q - 1] * base;
        }
        for (int i = 0; i < n; ++i) {
            Complex p(1, 0);
            for (size_t j = 0; j < drives.size(); ++j) p *= pow_table[j][occ[j][i]];
            pr[i] = p.real();
            pi[i] = p.imag();
        }
        kern.diag_scale_block(pr.data(), pi.data(), b.re.data(), b.im.data(), n, kp);
        kern.matmul_block(a.re.data(), a.im.data(), b.re.data(), b.im.data(),
                          c.re.data(), c.im.data(), n, kp);
        std::swap(b.re, c.re);
        std::swap(b.im, c.im);
        kern.diag_scale_block(pr.data(), pi.data(), b.re.data(), b.im.data(), n, kp);
        if (s % 64 == 0) check_unitarity(s);
    }
    check_unitarity(n_steps);
    rec.sample(t_g, b.to_matrix(k));
    rec.finish();
    out.endpoint = b.to_matrix(k);
    out.max_unitarity_error = max_err;
    return out;
}

PropagationResult propagate_expm(const std::function<Matrix(double)>& hamiltonian,
                                 double t_g, const Matrix& initial_columns,
                                 const std::vector<TrackedState>& trackers,
                                 const PropagationOptions& opts) {
    const int k = static_cast<int>(initial_columns.cols());
    const int n_steps = std::max(1, static_cast<int>(std::llround(t_g / opts.dt)));
    const double dt = t_g / n_steps;
    const int stride = pick_stride(n_steps, opts.trace_stride);

    Matrix state = initial_columns;
    PropagationResult out;
    out.t_g = t_g;
    out.dt = dt;
    out.method = Integrator::DirectExpm;
    Recorder rec(trackers, k, out);

    double max_err = 0;
    for (int s = 0; s < n_steps; ++s) {
        if (s % stride == 0) rec.sample(s * dt, state);
        const double t_mid = (s + 0.5) * dt;
        Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian(t_mid));
        if (es.info() != Eigen::Success)
            throw IntegrationError("step eigendecomposition failed");
        const Eigen::VectorXd ev = es.eigenvalues();
        Vector ph(ev.size());
        for (int i = 0; i < ev.size(); ++i) ph(i) = std::exp(Complex(0, -ev(i) * dt));
        state = es.eigenvectors() * ph.asDiagonal() * (es.eigenvectors().adjoint() * state);
        if (s % 64 == 0) {
            max_err = std::max(max_err, isometry_error(state));
            if (max_err > opts.unitarity_tol)
                throw IntegrationError("unitarity drift " + std::to_string(max_err) +
                                       "; reduce dt");
        }
    }
    max_err = std::max(max_err, isometry_error(state));
    rec.sample(t_g, state);
    rec.finish();
    out.endpoint = std::move(state);
    out.max_unitarity_error = max_err;
    return out;
}

}  // namespace

PropagationResult propagate(const Matrix& h0, const std::vector<DriveChannel>& drives,
                            double t_g, const Matrix& initial_columns,
                            const std::vector<TrackedState>& trackers,
                            const PropagationOptions& opts) {
    if (opts.dt <= 0) throw ConfigError("dt must be > 0");
    if (t_g <= 0) throw ConfigError("gate time must be > 0");
    if (h0.rows() != h0.cols() || h0.rows() != initial_columns.rows())
        throw ConfigError("dimension mismatch between H0 and the initial columns");
    for (const auto& d : drives) {
        if (d.occupation.size() != h0.rows())
            throw ConfigError("drive diagonal does not match H0");
        d.tone.envelope.validate(t_g);
    }
    if (opts.method == Integrator::SplitOperator)
        return propagate_split(h0, drives, t_g, initial_columns, trackers, opts);
    auto h_of_t = [&](double t) {
        Matrix h = h0;
        for (const auto& d : drives)
            h += (drive_value(d, t, t_g) * d.occupation).cast<Complex>().asDiagonal();
        return h;
    };
    return propagate_expm(h_of_t, t_g, initial_columns, trackers, opts);
}

PropagationResult propagate_tdep(const std::function<Matrix(double)>& hamiltonian,
                                 double t_g, const Matrix& initial_columns,
                                 const std::vector<TrackedState>& trackers,
                                 const PropagationOptions& opts) {
    if (opts.dt <= 0) throw ConfigError("dt must be > 0");
    if (t_g <= 0) throw ConfigError("gate time must be > 0");
    return propagate_expm(hamiltonian, t_g, initial_columns, trackers, opts);
}

double leakage(const PropagationResult& result,
               const std::vector<Vector>& computational_states,
               const std::vector<std::string>& initial_labels) {
    double kept = 0;
    for (const auto& label : initial_labels) {
        const int col = result.column_of(label);
        for (const auto& s : computational_states)
            kept += std::norm(Complex(s.adjoint() * result.endpoint.col(col)));
    }
    return 1.0 - kept / static_cast<double>(initial_labels.size());
}

double computational_leakage(const PropagationResult& result, const DressedFrame& frame) {
    const std::vector<Vector> comp = {
        frame.dressed_state(0, 0, 0), frame.dressed_state(0, 1, 0),
        frame.dressed_state(1, 0, 0), frame.dressed_state(1, 1, 0)};
    return leakage(result, comp, {"010", "100", "110"});
}

RabiFit rabi_fit(const Eigen::VectorXd& times, const Eigen::VectorXd& values) {
    const int n = static_cast<int>(times.size());
    if (n < 8 || values.size() != n) throw FitError("trace too short to fit");
    const double t_total = times(n - 1) - times(0);
    const double dt_s = t_total / (n - 1);
    if (t_total <= 0) throw FitError("degenerate time grid");

    const double mean = values.mean();
    const double sse_const = (values.array() - mean).square().sum();
    if (sse_const < 1e-20) throw FitError("trace is constant");

    struct Fit { double a, c, sse; };
    auto fit_at = [&](double omega) -> Fit {
        double s11 = 0, s1 = 0, sy = 0, ssy = 0, syy = 0;
        for (int i = 0; i < n; ++i) {
            const double s = std::sin(omega * times(i));
            const double x = s * s;
            s11 += x * x;
            s1 += x;
            sy += values(i);
            ssy += x * values(i);
            syy += values(i) * values(i);
        }
        const double det = s11 * n - s1 * s1;
        if (std::abs(det) < 1e-30) return {0, mean, sse_const};
        const double a = (ssy * n - sy * s1) / det;
        const double c = (s11 * sy - s1 * ssy) / det;
        // SSE via expansion; cheaper than a second pass.
        double sse = syy + a * a * s11 + n * c * c + 2 * a * c * s1 - 2 * a * ssy - 2 * c * sy;
        return {a, c, std::max(0.0, sse)};
    };

    const double w_lo = units::pi / (4.0 * t_total);
    const double w_hi = units::pi / (6.0 * dt_s);
    if (w_hi <= w_lo) throw FitError("trace too sparse to fit");
    const int n_scan = 600;
    double best_w = w_lo, best_sse = std::numeric_limits<double>::max();
    for (int i = 0; i <= n_scan; ++i) {
        const double w = w_lo * std::pow(w_hi / w_lo, double(i) / n_scan);
        const double sse = fit_at(w).sse;
        if (sse < best_sse) {
            best_sse = sse;
            best_w = w;
        }
    }
    const double ratio = std::pow(w_hi / w_lo, 1.0 / n_scan);
    const double refined = minimize_golden(
        [&](double w) { return fit_at(w).sse; }, best_w / ratio, best_w * ratio,
        1e-8 + 1e-7 * best_w);
    const Fit f = fit_at(refined);
    if (f.sse > 0.5 * sse_const || f.a < 1e-4)
        throw FitError("trace is not an oscillation the model can fit");
    return {refined, f.a, f.c, f.sse};
}

PulseFactorResult optimize_pulse_factor(const DressedFrame& frame, double t_g,
                                        const DriveTone& tone_1, const DriveTone& tone_2) {
    const CouplingConstants cc = coupling_constants(
        frame, frame.index(1, 1, 0), frame.index(0, 2, 0), Mode::Q2, Mode::Q1);
    const double detun = cphase_gap(frame) - tone_2.frequency;

    // End-of-gate population outside 110 in the {110, 020} surrogate with the
    // instantaneous-envelope coupling law.
    auto surrogate_leak = [&](double gamma) {
        const int n_steps = 20000;
        const double dt = t_g / n_steps;
        Complex u0(1, 0), u1(0, 0);  // (110, 020) amplitudes
        for (int s = 0; s < n_steps; ++s) {
            const double t = (s + 0.5) * dt;
            const double w1 = tone_1.amplitude * tone_1.envelope.value(t, t_g);
            const double w2 = gamma * tone_2.amplitude * tone_2.envelope.value(t, t_g);
            double g = cc.alpha * w2 * bessel_j0_plus_j2(cc.gamma * w2 / tone_2.frequency);
            if (w1 != 0.0) g *= bessel_j(0, cc.beta * w1 / tone_1.frequency);
            // exp(-i dt (d/2 I + (g, 0, d/2) . sigma)) on (u0, u1)
            const double half_d = 0.5 * detun;
            const double r = std::sqrt(g * g + half_d * half_d);
            const double cs = std::cos(r * dt);
            const double sn = r > 0 ? std::sin(r * dt) / r : dt;
            const Complex ph = std::exp(Complex(0, -half_d * dt));
            const Complex a0 = u0, a1 = u1;
            u0 = ph * (Complex(cs, half_d * sn) * a0 + Complex(0, -g * sn) * a1);
            u1 = ph * (Complex(0, -g * sn) * a0 + Complex(cs, -half_d * sn) * a1);
        }
        return std::norm(u1);
    };

    const double lo = 0.5, hi = 3.0;
    const int n_scan = 60;
    int best_i = 0;
    double best = std::numeric_limits<double>::max();
    for (int i = 0; i <= n_scan; ++i) {
        const double g = lo + (hi - lo) * i / n_scan;
        const double leak = surrogate_leak(g);
        if (leak < best) {
            best = leak;
            best_i = i;
        }
    }
    const double step = (hi - lo) / n_scan;
    const double a = std::max(lo, lo + best_i * step - step);
    const double b = std::min(hi, lo + best_i * step + step);
    PulseFactorResult res;
    res.gamma = minimize_golden(surrogate_leak, a, b, 1e-4);
    res.surrogate_leak = surrogate_leak(res.gamma);
    res.at_boundary = best_i == 0 || best_i == n_scan;
    return res;
}

}  // namespace cfsim
