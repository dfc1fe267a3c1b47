#include "cfsim/model.hpp"

#include <cmath>

namespace cfsim {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void DeviceParams::validate() const {
    if (dim_1 < 2 || dim_2 < 2 || dim_c < 2)
        throw ConfigError("every mode needs at least 2 levels");
    const long total = static_cast<long>(dim_1) * dim_2 * dim_c;
    if (dim_cap < 1 || total > dim_cap)
        throw ConfigError("total Hilbert-space dimension " + std::to_string(total) +
                          " exceeds the cap of " + std::to_string(dim_cap));
    if (!finite(omega_1) || !finite(omega_2) || !finite(omega_c) ||
        omega_1 <= 0 || omega_2 <= 0 || omega_c <= 0)
        throw ConfigError("mode frequencies must be finite and positive");
    if (!finite(delta_1) || !finite(delta_2) || !finite(delta_c))
        throw ConfigError("anharmonicities must be finite");
    if (!finite(g_1c) || !finite(g_2c) || !finite(g_12))
        throw ConfigError("couplings must be finite");
}

double DeviceParams::max_mode_frequency() const {
    return std::max({omega_1, omega_2, omega_c});
}

DeviceParams paper_device() {
    DeviceParams d;
    d.omega_1 = units::ghz_to_radns(7.15);
    d.omega_2 = units::ghz_to_radns(7.6);
    d.omega_c = units::ghz_to_radns(8.5);
    d.delta_1 = units::mhz_to_radns(-200.0);
    d.delta_2 = units::mhz_to_radns(-200.0);
    d.delta_c = 0.0;
    d.g_1c = units::mhz_to_radns(120.0);
    d.g_2c = units::mhz_to_radns(120.0);
    d.g_12 = 0.0;
    d.dim_1 = 5;
    d.dim_2 = 5;
    d.dim_c = 4;
    return d;
}

EnvelopeSpec EnvelopeSpec::resolved(double t_g) const {
    EnvelopeSpec e = *this;
    if (e.kind == Kind::FlatTopGaussian && e.tau2 < 0) e.tau2 = t_g - 2.0 * e.tau1;
    return e;
}

void EnvelopeSpec::validate(double t_g) const {
    if (scale <= 0 || !finite(scale)) throw ConfigError("envelope scale must be positive");
    if (kind == Kind::Rectangular) {
        if (scale != 1.0) throw ConfigError("rectangular envelope has unit scale");
        return;
    }
    const EnvelopeSpec e = resolved(t_g);
    if (e.tau1 <= 0 || e.sigma <= 0 || e.tau2 < 0)
        throw ConfigError("flat-top envelope needs tau1 > 0, sigma > 0, tau2 >= 0");
    if (std::abs(2.0 * e.tau1 + e.tau2 - t_g) > 1e-9 * std::max(1.0, t_g))
        throw ConfigError("flat-top envelope duration 2*tau1 + tau2 must equal the gate time");
}

double EnvelopeSpec::value(double t, double t_g) const {
    if (kind == Kind::Rectangular) return (t >= 0 && t <= t_g) ? scale : 0.0;
    const EnvelopeSpec e = resolved(t_g);
    const double total = 2.0 * e.tau1 + e.tau2;
    if (t < 0 || t > total) return 0.0;
    double f;
    if (t < e.tau1) {
        const double u = (t - e.tau1) / e.sigma;
        f = std::exp(-0.5 * u * u);
    } else if (t <= e.tau1 + e.tau2) {
        f = 1.0;
    } else {
        const double u = (t - e.tau1 - e.tau2) / e.sigma;
        f = std::exp(-0.5 * u * u);
    }
    return scale * f;
}

void DriveTone::validate(const DeviceParams& device) const {
    (void)device;
    if (amplitude < 0 || !finite(amplitude)) throw ConfigError("tone amplitude must be >= 0");
    if (frequency <= 0 || !finite(frequency)) throw ConfigError("tone frequency must be > 0");
    if (!finite(phase)) throw ConfigError("tone phase must be finite");
}

namespace {

double mode_energy(const DeviceParams& d, Mode m, int n) {
    double w = 0, dl = 0;
    switch (m) {
        case Mode::Q1: w = d.omega_1; dl = d.delta_1; break;
        case Mode::Q2: w = d.omega_2; dl = d.delta_2; break;
        case Mode::Coupler: w = d.omega_c; dl = d.delta_c; break;
    }
    return w * n + 0.5 * dl * n * (n - 1);
}

// Adds g * (a_from^op1)(b_to^op2)-type exchange terms. For each basis state,
// `shift_a`/`shift_b` give the occupation change on the two modes and the
// matrix-element factor is sqrt-laddered accordingly.
void add_two_mode_term(Matrix& h, const DeviceParams& d, Mode ma, Mode mb,
                       int shift_a, int shift_b, double g) {
    if (g == 0.0) return;
    const ModeDims dims = d.dims();
    const int n = dims.total();
    for (int f = 0; f < n; ++f) {
        BasisIndex from = unflatten(f, dims);
        int na = occupation(from, ma);
        int nb = occupation(from, mb);
        const int na2 = na + shift_a;
        const int nb2 = nb + shift_b;
        if (na2 < 0 || na2 >= dims.dim(ma) || nb2 < 0 || nb2 >= dims.dim(mb)) continue;
        // <n+1| a^+ |n> = sqrt(n+1), <n-1| a |n> = sqrt(n)
        const double amp_a = shift_a > 0 ? std::sqrt(double(na + 1)) : std::sqrt(double(na));
        const double amp_b = shift_b > 0 ? std::sqrt(double(nb + 1)) : std::sqrt(double(nb));
        int occ[3] = {from.q1, from.q2, from.r};
        occ[mode_index(ma)] = na2;
        occ[mode_index(mb)] = nb2;
        const int to = flat_index(occ[0], occ[1], occ[2], dims);
        h(to, f) += g * amp_a * amp_b;
    }
}

Matrix build_hamiltonian(const DeviceParams& device, bool rwa) {
    device.validate();
    const ModeDims dims = device.dims();
    const int n = dims.total();
    Matrix h = Matrix::Zero(n, n);
    for (int f = 0; f < n; ++f) {
        BasisIndex b = unflatten(f, dims);
        h(f, f) = mode_energy(device, Mode::Q1, b.q1) +
                  mode_energy(device, Mode::Q2, b.q2) +
                  mode_energy(device, Mode::Coupler, b.r);
    }
    struct Pair { Mode a, b; double g; };
    const Pair pairs[] = {{Mode::Q1, Mode::Coupler, device.g_1c},
                          {Mode::Q2, Mode::Coupler, device.g_2c},
                          {Mode::Q1, Mode::Q2, device.g_12}};
    for (const auto& p : pairs) {
        // Exchange part a^+ b + a b^+ is present in both variants.
        add_two_mode_term(h, device, p.a, p.b, +1, -1, p.g);
        add_two_mode_term(h, device, p.a, p.b, -1, +1, p.g);
        if (!rwa) {
            // Counter-rotating part a^+ b^+ + a b.
            add_two_mode_term(h, device, p.a, p.b, +1, +1, p.g);
            add_two_mode_term(h, device, p.a, p.b, -1, -1, p.g);
        }
    }
    return h;
}

}  // namespace

Matrix build_rwa_hamiltonian(const DeviceParams& device) {
    return build_hamiltonian(device, true);
}

Matrix build_non_rwa_hamiltonian(const DeviceParams& device) {
    return build_hamiltonian(device, false);
}

Eigen::VectorXd occupation_diagonal(const DeviceParams& device, Mode mode) {
    device.validate();
    const ModeDims dims = device.dims();
    const int n = dims.total();
    Eigen::VectorXd diag(n);
    for (int f = 0; f < n; ++f) diag(f) = occupation(unflatten(f, dims), mode);
    return diag;
}

Matrix build_drive_generator(const DeviceParams& device, Mode mode) {
    return occupation_diagonal(device, mode).cast<Complex>().asDiagonal();
}

// ---------------------------------------------------------------------------
// Toy model
// ---------------------------------------------------------------------------

void ToyParams::validate() const {
    if (!finite(Delta) || !finite(delta) || !finite(g))
        throw ConfigError("toy parameters must be finite");
    for (const ToyTone* t : {&drive1, &drive2}) {
        if (t->amplitude < 0) throw ConfigError("toy drive amplitude must be >= 0");
        if (t->amplitude > 0 && t->frequency <= 0)
            throw ConfigError("toy drive with nonzero amplitude needs frequency > 0");
    }
    if (ac) {
        if (!g0) throw ConfigError("DC+AC variant needs g0");
        if (ac->amplitude > 0 && ac->frequency <= 0)
            throw ConfigError("AC tone needs frequency > 0");
    }
}

Matrix build_toy_hamiltonian(const ToyParams& p, double t) {
    p.validate();
    const double s2g = std::sqrt(2.0) * p.g;
    Matrix h = Matrix::Zero(5, 5);
    h(0, 1) = h(1, 0) = p.g;
    h(1, 1) = p.Delta;
    h(2, 2) = p.Delta;
    h(2, 3) = h(3, 2) = s2g;
    h(2, 4) = h(4, 2) = s2g;
    h(3, 3) = p.delta;
    h(4, 4) = 2.0 * p.Delta + p.delta;
    const double h1 = p.drive1.amplitude * std::sin(p.drive1.frequency * t);
    const double h2 = p.drive2.amplitude * std::sin(p.drive2.frequency * t);
    h(0, 0) += h2;
    h(1, 1) += h1;
    h(2, 2) += h1 + h2;
    h(3, 3) += 2.0 * h2;
    h(4, 4) += 2.0 * h1;
    return h;
}

Matrix build_toy_dc_ac_hamiltonian(const ToyParams& p, double t) {
    p.validate();
    if (!p.g0 || !p.ac) throw ConfigError("DC+AC toy model needs g0 and an AC tone");
    const double g = *p.g0 + p.ac->amplitude * std::sin(p.ac->frequency * t);
    const double s2g = std::sqrt(2.0) * g;
    Matrix h = Matrix::Zero(5, 5);
    h(0, 1) = h(1, 0) = g;
    h(2, 3) = h(3, 2) = s2g;
    h(2, 4) = h(4, 2) = s2g;
    h(3, 3) = p.delta;  // |02>
    h(4, 4) = p.delta;  // |20>
    return h;
}

namespace {

double toy_ratio(const ToyTone& t) {
    return t.amplitude == 0.0 ? 0.0 : t.amplitude / t.frequency;
}

}  // namespace

Matrix toy_frame_unitary(const ToyParams& p, double t) {
    const double x1 = toy_ratio(p.drive1);
    const double x2 = toy_ratio(p.drive2);
    const double c1 = x1 * std::cos(p.drive1.frequency * t);
    const double c2 = x2 * std::cos(p.drive2.frequency * t);
    const Complex i(0, 1);
    Matrix u = Matrix::Zero(5, 5);
    u(0, 0) = std::exp(i * c2);
    u(1, 1) = std::exp(i * (c1 - p.Delta * t));
    u(2, 2) = std::exp(i * (c1 + c2 - p.Delta * t));
    u(3, 3) = std::exp(i * (2.0 * c2 - p.delta * t));
    u(4, 4) = std::exp(i * (2.0 * c1 - 2.0 * p.Delta * t - p.delta * t));
    return u;
}

Matrix build_toy_rotating_hamiltonian(const ToyParams& p, double t) {
    p.validate();
    const double x1 = toy_ratio(p.drive1);
    const double x2 = toy_ratio(p.drive2);
    const double c1 = x1 * std::cos(p.drive1.frequency * t);
    const double c2 = x2 * std::cos(p.drive2.frequency * t);
    const Complex i(0, 1);
    const double s2g = std::sqrt(2.0) * p.g;
    Matrix h = Matrix::Zero(5, 5);
    h(0, 1) = p.g * std::exp(i * (c1 - c2 - p.Delta * t));
    h(2, 3) = s2g * std::exp(i * (c2 - c1 + (p.Delta - p.delta) * t));
    h(2, 4) = s2g * std::exp(i * (c1 - c2 - (p.Delta + p.delta) * t));
    h(1, 0) = std::conj(h(0, 1));
    h(3, 2) = std::conj(h(2, 3));
    h(4, 2) = std::conj(h(2, 4));
    return h;
}

}  // namespace cfsim
