#include "cfsim/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "cfsim/bessel.hpp"
#include "cfsim/rootfind.hpp"
#include "cfsim/units.hpp"

namespace cfsim {

namespace {

constexpr double kRootTol = 1e-11;  // rad/ns; well inside the 1e-6 budget
constexpr double kSettleTol = 1e-10;

double default_omega_max(double omega_max) {
    return omega_max > 0 ? omega_max : units::ghz_to_radns(2.0);
}

CouplingConstants iswap_constants(const DressedFrame& frame) {
    return coupling_constants(frame, frame.index(1, 0, 0), frame.index(0, 1, 0),
                              Mode::Q1, Mode::Q2);
}

CouplingConstants cphase_constants(const DressedFrame& frame) {
    return coupling_constants(frame, frame.index(1, 1, 0), frame.index(0, 2, 0),
                              Mode::Q2, Mode::Q1);
}

double sign_of(double x) { return x < 0 ? -1.0 : 1.0; }

}  // namespace

EffectiveCoupling g_single(const CouplingConstants& cc, double omega_1, double nu_1) {
    EffectiveCoupling g;
    g.magnitude = cc.alpha * omega_1 * bessel_j0_plus_j2(cc.beta * omega_1 / nu_1);
    return g;
}

EffectiveCoupling g_crosstalk(const CouplingConstants& cc, double omega_1, double nu_1,
                              double omega_2, double nu_2) {
    EffectiveCoupling g = g_single(cc, omega_1, nu_1);
    if (omega_2 != 0.0) g.magnitude *= bessel_j(0, cc.gamma * omega_2 / nu_2);
    return g;
}

EffectiveCoupling g_multi(const CouplingConstants& cc, double omega_1, double nu_1,
                          const std::vector<OffResonantDrive>& others) {
    EffectiveCoupling g = g_single(cc, omega_1, nu_1);
    for (const auto& d : others)
        if (d.amplitude != 0.0)
            g.magnitude *= bessel_j(0, d.gamma * d.amplitude / d.frequency);
    return g;
}

EffectiveCoupling g_cphase(const CouplingConstants& cc, double omega_1, double nu_1,
                           double omega_2, double nu_2, double delta_110_020) {
    EffectiveCoupling g;
    g.magnitude = cc.alpha * omega_2 * bessel_j0_plus_j2(cc.gamma * omega_2 / nu_2);
    if (omega_1 != 0.0) g.magnitude *= bessel_j(0, cc.beta * omega_1 / nu_1);
    g.detuning = delta_110_020 - nu_2;
    return g;
}

// ---------------------------------------------------------------------------
// Generalized series
// ---------------------------------------------------------------------------

std::vector<GTerm> g_series(const DressedFrame& frame,
                            const BasisIndex& a, const BasisIndex& b,
                            const std::vector<SeriesDrive>& drives, int cutoff) {
    if (cutoff < 0) throw ConfigError("series cutoff must be >= 0");
    if (drives.size() > 3) throw ConfigError("at most one tone per mode");

    // Slot order (r, 1, 2) = (coupler, qubit 1, qubit 2).
    struct Slot {
        double omega = 0, nu = 1, phase = 0, s = 0;
        bool active = false;
    };
    Slot slot[3];
    const int col_a = frame.column(a);
    const int col_b = frame.column(b);
    for (const auto& d : drives) {
        int si = d.target == Mode::Coupler ? 0 : (d.target == Mode::Q1 ? 1 : 2);
        if (slot[si].active) throw ConfigError("duplicate drive on one mode");
        if (d.amplitude > 0 && d.frequency <= 0) throw ConfigError("drive frequency must be > 0");
        const int mi = mode_index(d.target);
        slot[si].active = d.amplitude != 0.0;
        slot[si].omega = d.amplitude;
        slot[si].nu = d.frequency > 0 ? d.frequency : 1.0;
        slot[si].phase = d.phase;
        slot[si].s = slot[si].active
                         ? (frame.n_coeffs[mi](col_a) - frame.n_coeffs[mi](col_b)) *
                               d.amplitude / slot[si].nu
                         : 0.0;
    }
    const Complex c_of[3] = {
        frame.c_coeffs[mode_index(Mode::Coupler)](col_a, col_b),
        frame.c_coeffs[mode_index(Mode::Q1)](col_a, col_b),
        frame.c_coeffs[mode_index(Mode::Q2)](col_a, col_b),
    };
    const double base_freq = frame.eigenvalues(col_a) - frame.eigenvalues(col_b);

    auto range = [&](int si) { return slot[si].active ? cutoff : 0; };
    const Complex iunit(0, 1);
    std::vector<GTerm> terms;
    for (int nr = -range(0); nr <= range(0); ++nr)
        for (int n1 = -range(1); n1 <= range(1); ++n1)
            for (int n2 = -range(2); n2 <= range(2); ++n2) {
                const int n[3] = {nr, n1, n2};
                Complex amp(0, 0);
                for (int m = 0; m < 3; ++m) {
                    if (!slot[m].active) continue;
                    double a_coef = 0.5 * (bessel_j(n[m] + 1, -slot[m].s) +
                                           bessel_j(n[m] - 1, -slot[m].s));
                    for (int k = 0; k < 3; ++k)
                        if (k != m) a_coef *= bessel_j(n[k], -slot[k].s);
                    amp += a_coef * slot[m].omega * c_of[m];
                }
                if (amp == Complex(0, 0)) continue;
                const int nsum = nr + n1 + n2;
                amp *= std::exp(iunit * (units::pi / 2.0 * nsum -
                                         nr * slot[0].phase - n1 * slot[1].phase -
                                         n2 * slot[2].phase));
                GTerm term;
                term.n_r = nr;
                term.n_1 = n1;
                term.n_2 = n2;
                term.amplitude = amp;
                term.oscillation =
                    base_freq - nr * slot[0].nu - n1 * slot[1].nu - n2 * slot[2].nu;
                terms.push_back(term);
            }
    return terms;
}

Complex g_series_stationary(const std::vector<GTerm>& terms, double freq_tol) {
    Complex sum(0, 0);
    for (const auto& t : terms)
        if (std::abs(t.oscillation) < freq_tol) sum += t.amplitude;
    return sum;
}

std::vector<ResonanceHit> resonance_scan(const DressedFrame& frame,
                                         const std::vector<SeriesDrive>& drives,
                                         int max_photons, double threshold) {
    double nu[3] = {0, 0, 0};
    bool active[3] = {false, false, false};
    for (const auto& d : drives) {
        int si = d.target == Mode::Coupler ? 0 : (d.target == Mode::Q1 ? 1 : 2);
        if (d.amplitude != 0.0) {
            if (d.frequency <= 0) throw ConfigError("drive frequency must be > 0");
            nu[si] = d.frequency;
            active[si] = true;
        }
    }
    auto range = [&](int si) { return active[si] ? max_photons : 0; };
    const int dim = frame.dims.total();
    std::vector<ResonanceHit> hits;
    for (int fa = 0; fa < dim; ++fa)
        for (int fb = fa; fb < dim; ++fb) {
            const BasisIndex a = unflatten(fa, frame.dims);
            const BasisIndex b = unflatten(fb, frame.dims);
            const double gap = frame.eigenvalues(frame.column(a)) -
                               frame.eigenvalues(frame.column(b));
            for (int nr = -range(0); nr <= range(0); ++nr)
                for (int n1 = -range(1); n1 <= range(1); ++n1)
                    for (int n2 = -range(2); n2 <= range(2); ++n2) {
                        // Self-pairs only contribute the trivial zero tuple.
                        if (fa == fb && (nr != 0 || n1 != 0 || n2 != 0)) continue;
                        const double res =
                            std::abs(gap - nr * nu[0] - n1 * nu[1] - n2 * nu[2]);
                        if (res < threshold)
                            hits.push_back({a, b, nr, n1, n2, res});
                    }
        }
    std::sort(hits.begin(), hits.end(), [](const ResonanceHit& x, const ResonanceHit& y) {
        if (x.residual != y.residual) return x.residual < y.residual;
        if (x.a.flat != y.a.flat) return x.a.flat < y.a.flat;
        return x.b.flat < y.b.flat;
    });
    return hits;
}

// ---------------------------------------------------------------------------
// Optimal amplitude and control laws
// ---------------------------------------------------------------------------

AmplitudeSolution solve_optimal_amplitude(const DressedFrame& frame, double t_g,
                                          double omega_1, double nu_1, double nu_2,
                                          double omega_max) {
    if (t_g <= 0) throw ConfigError("gate time must be > 0");
    AmplitudeSolution sol;
    const double gap = cphase_gap(frame);
    const double half_det = 0.5 * (gap - nu_2);
    const double disc = (units::pi / t_g) * (units::pi / t_g) - half_det * half_det;
    if (disc < 0) {
        sol.status = SolveStatus::Infeasible;
        return sol;
    }
    const CouplingConstants cc = cphase_constants(frame);
    const double cross = omega_1 != 0.0 ? bessel_j(0, cc.beta * omega_1 / nu_1) : 1.0;
    const double target = sign_of(cc.alpha * cross) * std::sqrt(disc);
    auto f = [&](double w2) {
        return cc.alpha * w2 * cross * bessel_j0_plus_j2(cc.gamma * w2 / nu_2) - target;
    };
    const auto root = find_first_root(f, 0.0, default_omega_max(omega_max), 600, kRootTol);
    if (!root) {
        sol.status = SolveStatus::Unsolvable;
        return sol;
    }
    sol.status = SolveStatus::Found;
    sol.omega_2 = *root;
    sol.g2_target = target;
    return sol;
}

AnglePrediction predict_theta_phi(const DressedFrame& frame, double t_g,
                                  double omega_1, double nu_1, double nu_2,
                                  double omega_2) {
    AnglePrediction p;
    const CouplingConstants c1 = iswap_constants(frame);
    const CouplingConstants c2 = cphase_constants(frame);
    p.g1 = g_crosstalk(c1, omega_1, nu_1, omega_2, nu_2).magnitude;
    p.g2 = g_cphase(c2, omega_1, nu_1, omega_2, nu_2, cphase_gap(frame)).magnitude;
    const double sin_theta = 0.5 * (1.0 - std::cos(2.0 * p.g1 * t_g));
    p.theta = std::asin(std::clamp(sin_theta, 0.0, 1.0));
    p.theta_linear = std::asin(std::abs(std::sin(p.g1 * t_g)));
    const double xi = zz_strength(frame);
    p.phi = units::wrap_pi(units::pi -
                           0.5 * ((cphase_gap(frame) - nu_2) + 2.0 * xi) * t_g);
    return p;
}

ControlSolution invert_targets(const DressedFrame& frame, double t_g,
                               double theta_target, double phi_target,
                               double omega_max) {
    if (theta_target < 0 || theta_target > units::pi / 2)
        throw ConfigError("theta target must lie in [0, pi/2]");
    if (phi_target <= -units::pi || phi_target > units::pi)
        throw ConfigError("phi target must lie in (-pi, pi]");
    ControlSolution sol;
    const double xi = zz_strength(frame);
    const double gap = cphase_gap(frame);
    sol.nu_1 = iswap_gap(frame);

    const double g1_mag =
        std::acos(std::clamp(1.0 - 2.0 * std::sin(theta_target), -1.0, 1.0)) / (2.0 * t_g);
    // The conditional phase is only defined mod 2*pi, so the inversion picks
    // the preimage whose phase rate fits the one-cycle feasibility window
    // |rate| <= pi/t_g; among feasible branches, the one closest to the
    // resonance (largest |g2|) is the most robust.
    double phase_rate = 0, disc = -1;
    for (int k : {0, -1, 1, -2, 2}) {
        const double rate = (units::pi - phi_target - units::two_pi * k) / t_g - xi;
        const double d = (units::pi / t_g) * (units::pi / t_g) - rate * rate;
        if (d > disc) {
            disc = d;
            phase_rate = rate;
        }
    }
    sol.nu_2 = gap - 2.0 * phase_rate;
    if (disc < 0 || sol.nu_2 <= 0) {
        sol.status = SolveStatus::Infeasible;
        return sol;
    }
    const double g2_mag = std::sqrt(disc);

    const CouplingConstants c1 = iswap_constants(frame);
    const CouplingConstants c2 = cphase_constants(frame);
    const double wmax = default_omega_max(omega_max);

    // Omega_2 at fixed Omega_1 from the CPHASE law, then Omega_1 from the
    // iSWAP law with the J0 crosstalk of the current Omega_2; repeat until
    // both amplitudes settle.
    double w1 = 0, w2 = 0;
    for (int it = 0; it < 100; ++it) {
        const double cross2 = w1 != 0.0 ? bessel_j(0, c2.beta * w1 / sol.nu_1) : 1.0;
        const double t2 = sign_of(c2.alpha * cross2) * g2_mag;
        auto f2 = [&](double w) {
            return c2.alpha * w * cross2 * bessel_j0_plus_j2(c2.gamma * w / sol.nu_2) - t2;
        };
        const auto r2 = find_first_root(f2, 0.0, wmax, 600, kRootTol);
        if (!r2) {
            sol.status = SolveStatus::Unsolvable;
            return sol;
        }
        double new_w2 = *r2;

        double new_w1 = 0;
        if (g1_mag > 0) {
            const double cross1 = bessel_j(0, c1.gamma * new_w2 / sol.nu_2);
            const double t1 = sign_of(c1.alpha * cross1) * g1_mag;
            auto f1 = [&](double w) {
                return c1.alpha * w * bessel_j0_plus_j2(c1.beta * w / sol.nu_1) * cross1 - t1;
            };
            const auto r1 = find_first_root(f1, 0.0, wmax, 600, kRootTol);
            if (!r1) {
                sol.status = SolveStatus::Unsolvable;
                return sol;
            }
            new_w1 = *r1;
        }
        const bool settled =
            std::abs(new_w1 - w1) < kSettleTol && std::abs(new_w2 - w2) < kSettleTol;
        w1 = new_w1;
        w2 = new_w2;
        if (settled) {
            sol.status = SolveStatus::Found;
            break;
        }
    }
    if (sol.status != SolveStatus::Found) {
        sol.status = SolveStatus::Unsolvable;
        return sol;
    }
    sol.omega_1 = w1;
    sol.omega_2 = w2;
    const AnglePrediction p = predict_theta_phi(frame, t_g, w1, sol.nu_1, sol.nu_2, w2);
    sol.theta = p.theta;
    sol.phi = p.phi;
    sol.g1 = p.g1;
    sol.g2 = p.g2;
    return sol;
}

std::optional<double> idle_zz_cancel(const DressedFrame& frame, double nu,
                                     double omega_max) {
    if (nu <= 0) throw ConfigError("idle tone frequency must be > 0");
    const double xi = zz_strength(frame);
    const double det = cphase_gap(frame) - nu;
    const CouplingConstants cc = cphase_constants(frame);
    auto f = [&](double w) {
        const double g = cc.alpha * w * bessel_j0_plus_j2(cc.gamma * w / nu);
        return g * g - xi * det - 0.25 * xi * xi;
    };
    return find_first_root(f, 0.0, default_omega_max(omega_max), 600, 1e-12);
}

std::pair<double, double> toy_conditional_phase(double detuning_2lvl, double g) {
    const double r2 = detuning_2lvl * detuning_2lvl + 4.0 * g * g;
    if (r2 == 0.0) throw ConfigError("conditional phase undefined for g = detuning = 0");
    const double r = std::sqrt(r2);
    return {units::pi * (1.0 - detuning_2lvl / r), units::two_pi / r};
}

std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> toy_block_hamiltonians(const ToyParams& p) {
    p.validate();
    const double x1 = p.drive1.amplitude == 0 ? 0.0 : p.drive1.amplitude / p.drive1.frequency;
    const double x2 = p.drive2.amplitude == 0 ? 0.0 : p.drive2.amplitude / p.drive2.frequency;
    const double g_iswap = p.g * bessel_j(1, x1) * bessel_j(0, x2);
    const double g_cz = std::sqrt(2.0) * p.g * bessel_j(0, x1) * bessel_j(1, x2);
    Eigen::Matrix2cd h10_01 = Eigen::Matrix2cd::Zero();
    h10_01(0, 1) = h10_01(1, 0) = g_iswap;
    Eigen::Matrix2cd h11_02 = Eigen::Matrix2cd::Zero();
    h11_02(0, 1) = h11_02(1, 0) = g_cz;
    h11_02(1, 1) = -p.epsilon();
    return {h10_01, h11_02};
}

}  // namespace cfsim
