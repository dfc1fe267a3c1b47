#include "cfsim/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace cfsim {

int DressedFrame::column(const BasisIndex& b) const {
    const int col = label_to_column.at(b.flat);
    if (col < 0) throw LabelError("no dressed label for bare state " + std::to_string(b.flat));
    return col;
}

int DressedFrame::column(int q1, int q2, int r) const {
    return column(make_basis_index(q1, q2, r, dims));
}

double DressedFrame::eigenfrequency(int q1, int q2, int r) const {
    return eigenvalues(column(q1, q2, r));
}

Vector DressedFrame::dressed_state(int q1, int q2, int r) const {
    return u0.col(column(q1, q2, r));
}

double DressedFrame::n_coeff(Mode m, int q1, int q2, int r) const {
    return n_coeffs[mode_index(m)](column(q1, q2, r));
}

Complex DressedFrame::c_coeff(Mode m, const BasisIndex& a, const BasisIndex& b) const {
    return c_coeffs[mode_index(m)](column(a), column(b));
}

DressedFrame diagonalize(const Matrix& h0, const DeviceParams& device) {
    device.validate();
    const ModeDims dims = device.dims();
    const int n = dims.total();
    if (h0.rows() != n || h0.cols() != n)
        throw ConfigError("Hamiltonian dimension does not match the device");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(h0);
    if (solver.info() != Eigen::Success) throw ConfigError("eigendecomposition failed");

    DressedFrame frame;
    frame.device = device;
    frame.dims = dims;
    frame.eigenvalues = solver.eigenvalues();
    frame.u0 = solver.eigenvectors();

    // Gauge: make the largest-magnitude component of each column real-positive.
    for (int c = 0; c < n; ++c) {
        int imax = 0;
        double vmax = 0;
        for (int i = 0; i < n; ++i) {
            const double v = std::abs(frame.u0(i, c));
            if (v > vmax) {
                vmax = v;
                imax = i;
            }
        }
        const Complex z = frame.u0(imax, c);
        if (std::abs(z) > 0) frame.u0.col(c) *= std::conj(z) / std::abs(z);
    }

    // Greedy maximum-overlap labeling: all (bare, column) pairs in descending
    // |overlap| order, each side claimed at most once. Deterministic
    // tie-break on indices.
    struct Cand { double overlap; int bare, col; };
    std::vector<Cand> cands;
    cands.reserve(static_cast<size_t>(n) * n);
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
            const double ov = std::abs(frame.u0(b, c));
            if (ov > 1e-14) cands.push_back({ov, b, c});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.overlap != y.overlap) return x.overlap > y.overlap;
        if (x.bare != y.bare) return x.bare < y.bare;
        return x.col < y.col;
    });
    frame.label_to_column.assign(n, -1);
    frame.label_overlap.assign(n, 0.0);
    std::vector<char> col_taken(n, 0);
    int assigned = 0;
    for (const Cand& c : cands) {
        if (assigned == n) break;
        if (frame.label_to_column[c.bare] >= 0 || col_taken[c.col]) continue;
        frame.label_to_column[c.bare] = c.col;
        frame.label_overlap[c.bare] = c.overlap;
        col_taken[c.col] = 1;
        ++assigned;
        if (c.overlap < 0.5) frame.ambiguous_labels.push_back(c.bare);
    }
    std::sort(frame.ambiguous_labels.begin(), frame.ambiguous_labels.end());

    for (Mode m : {Mode::Q1, Mode::Q2, Mode::Coupler}) {
        const Eigen::VectorXd occ = occupation_diagonal(device, m);
        Matrix t = frame.u0.adjoint() * occ.asDiagonal() * frame.u0;
        const int mi = mode_index(m);
        frame.n_coeffs[mi] = t.diagonal().real();
        t.diagonal().setZero();
        frame.c_coeffs[mi] = std::move(t);
    }
    return frame;
}

double detuning(const DressedFrame& frame, const BasisIndex& a, const BasisIndex& b) {
    return frame.eigenvalues(frame.column(a)) - frame.eigenvalues(frame.column(b));
}

double zz_strength(const DressedFrame& frame) {
    return frame.eigenfrequency(1, 1, 0) + frame.eigenfrequency(0, 0, 0) -
           frame.eigenfrequency(1, 0, 0) - frame.eigenfrequency(0, 1, 0);
}

double iswap_gap(const DressedFrame& frame) {
    return std::abs(frame.eigenfrequency(0, 1, 0) - frame.eigenfrequency(1, 0, 0));
}

double cphase_gap(const DressedFrame& frame) {
    const double gap = frame.eigenfrequency(0, 2, 0) - frame.eigenfrequency(1, 1, 0);
    if (gap <= 0)
        throw ConfigError("expected the 020 level above 110; this device is not supported");
    return gap;
}

CouplingConstants coupling_constants(const DressedFrame& frame,
                                     const BasisIndex& a, const BasisIndex& b,
                                     Mode drive_mode, Mode spectator_mode) {
    if (drive_mode == spectator_mode) throw ConfigError("drive and spectator modes must differ");
    CouplingConstants cc;
    const Complex c = frame.c_coeff(drive_mode, a, b);
    cc.alpha = 0.5 * c.real();
    if (std::abs(c.imag()) > 1e-9 * std::max(1.0, std::abs(c.real())))
        throw ConfigError("C coefficient not real in the fixed gauge");
    // beta follows tone 1, gamma follows tone 2, whichever is the resonant one.
    const Mode m1 = (drive_mode == Mode::Q1 || spectator_mode == Mode::Q1) ? Mode::Q1 : drive_mode;
    const Mode m2 = (drive_mode == Mode::Q2 || spectator_mode == Mode::Q2) ? Mode::Q2 : spectator_mode;
    auto ndiff = [&](Mode m) {
        return frame.n_coeffs[mode_index(m)](frame.column(a)) -
               frame.n_coeffs[mode_index(m)](frame.column(b));
    };
    cc.beta = ndiff(m1);
    cc.gamma = ndiff(m2);
    return cc;
}

}  // namespace cfsim
