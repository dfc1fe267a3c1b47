#include "cfsim/gate.hpp"

#include <cmath>

#include "cfsim/units.hpp"

namespace cfsim {

namespace {

constexpr double kDiagonalThreshold = 0.1;  // |cos(theta)| below which the
                                            // diagonal entries are unusable

double arg(const Complex& z) { return std::arg(z); }

}  // namespace

Matrix computational_columns(const DressedFrame& frame) {
    const int n = frame.dims.total();
    Matrix c(n, 4);
    c.col(0) = frame.dressed_state(0, 0, 0);
    c.col(1) = frame.dressed_state(0, 1, 0);
    c.col(2) = frame.dressed_state(1, 0, 0);
    c.col(3) = frame.dressed_state(1, 1, 0);
    return c;
}

ComputationalUnitary project(const Matrix& u_full, const DressedFrame& frame) {
    const Matrix c = computational_columns(frame);
    ComputationalUnitary m;
    m.matrix = c.adjoint() * u_full * c;
    m.subspace_norm = (m.matrix * m.matrix.adjoint()).trace().real();
    return m;
}

ComputationalUnitary project_columns(const Matrix& endpoint, const DressedFrame& frame) {
    if (endpoint.cols() != 4)
        throw ConfigError("expected the four computational columns");
    const Matrix c = computational_columns(frame);
    ComputationalUnitary m;
    m.matrix = c.adjoint() * endpoint;
    m.subspace_norm = (m.matrix * m.matrix.adjoint()).trace().real();
    return m;
}

Eigen::Matrix4cd ideal_fsim(double theta, double phi) {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    const Complex mis(0, -std::sin(theta));
    u(0, 0) = 1;
    u(1, 1) = std::cos(theta);
    u(2, 2) = std::cos(theta);
    u(1, 2) = mis;
    u(2, 1) = mis;
    u(3, 3) = std::exp(Complex(0, phi));
    return u;
}

ExtractedAngles extract_angles(const ComputationalUnitary& m) {
    if (m.subspace_norm <= 3.5)
        throw ExtractionError("subspace norm " + std::to_string(m.subspace_norm) +
                              " too low; extraction unreliable");
    const Eigen::Matrix4cd& u = m.matrix;
    ExtractedAngles out;
    out.theta = std::asin(std::clamp(std::abs(u(1, 2)), 0.0, 1.0));

    const double gamma = arg(u(0, 0));
    const double cos_t = std::cos(out.theta);

    // Local-Z frame: M = e^{i gamma} Z_post fSim Z_pre gives diagonal phases
    // p1, p2 and the exchange combination q (see header). Each phase is read
    // from its entry whenever that entry carries weight; a vanishing entry
    // leaves the corresponding phase free and any consistent value works.
    constexpr double kEntryTol = 1e-8;
    const bool have_diag = std::abs(u(1, 1)) > kEntryTol && std::abs(u(2, 2)) > kEntryTol;
    const bool have_exch = std::abs(u(1, 2)) > kEntryTol && std::abs(u(2, 1)) > kEntryTol;
    double p1, p2, q;
    if (have_diag) {
        p2 = arg(u(1, 1)) - gamma;
        p1 = arg(u(2, 2)) - gamma;
        q = have_exch ? arg(u(1, 2)) - gamma + units::pi / 2 : p2;
    } else {
        q = arg(u(1, 2)) - gamma + units::pi / 2;
        const double q2 = arg(u(2, 1)) - gamma + units::pi / 2;
        p1 = q2;
        p2 = q;
    }
    // Conditional phase: the diagonal combination away from the theta -> 90
    // degeneracy, the exchange combination at it.
    if (cos_t > kDiagonalThreshold) {
        out.phi = arg(u(3, 3)) + gamma - arg(u(1, 1)) - arg(u(2, 2));
    } else {
        out.phi = arg(u(3, 3)) + gamma - arg(u(1, 2)) - arg(u(2, 1)) - units::pi;
    }
    out.phi = units::wrap_pi(out.phi);
    out.frame_phases = {units::wrap_pi(gamma), units::wrap_pi(p1),
                        units::wrap_pi(p2), units::wrap_pi(q)};
    return out;
}

Eigen::Matrix4cd dealigned(const ComputationalUnitary& m, const ExtractedAngles& a) {
    const double gamma = a.frame_phases[0];
    const double p1 = a.frame_phases[1];
    const double p2 = a.frame_phases[2];
    const double q = a.frame_phases[3];
    // Split the phase sums into post/pre diagonal frames reproducing the
    // entry-wise structure: post (x1, x2), pre (y1, y2) with x + y = p and
    // x2 + y1 = q.
    const double y2 = 0;
    const double x2 = p2;
    const double y1 = q - x2;
    const double x1 = p1 - y1;
    const Complex i(0, 1);
    Eigen::Vector4cd post, pre;
    post << 1, std::exp(-i * x2), std::exp(-i * x1), std::exp(-i * (x1 + x2));
    pre << 1, std::exp(-i * y2), std::exp(-i * y1), std::exp(-i * (y1 + y2));
    return std::exp(-i * gamma) * post.asDiagonal() * m.matrix * pre.asDiagonal();
}

double fidelity(const Eigen::Matrix4cd& m, const Eigen::Matrix4cd& target) {
    const Eigen::Matrix4cd composed = target.adjoint() * m;
    const double tr_mm = (composed * composed.adjoint()).trace().real();
    const double tr_m = std::abs(composed.trace());
    return (tr_mm + tr_m * tr_m) / 20.0;
}

GateReport gate_report(const PropagationResult& result, const DressedFrame& frame,
                       const std::optional<ControlSolution>& predicted) {
    ComputationalUnitary m = project_columns(result.endpoint, frame);

    // Divide out free evolution at the dressed single-qubit frequencies. The
    // 110 entry uses the local-Z-constrained combination, so the ZZ part of
    // the free evolution is kept in the conditional phase.
    const double w000 = frame.eigenfrequency(0, 0, 0);
    const double w010 = frame.eigenfrequency(0, 1, 0);
    const double w100 = frame.eigenfrequency(1, 0, 0);
    const double t_g = result.t_g;
    const Complex i(0, 1);
    Eigen::Vector4cd undo;
    undo << std::exp(i * w000 * t_g), std::exp(i * w010 * t_g),
        std::exp(i * w100 * t_g), std::exp(i * (w100 + w010 - w000) * t_g);
    m.matrix = undo.asDiagonal() * m.matrix;

    const ExtractedAngles angles = extract_angles(m);
    const Eigen::Matrix4cd aligned = dealigned(m, angles);

    GateReport rep;
    rep.theta = angles.theta;
    rep.phi = angles.phi;
    rep.phi_full_dressed = units::wrap_pi(angles.phi + zz_strength(frame) * t_g);
    rep.single_qubit_phases = angles.frame_phases;
    rep.subspace_norm = m.subspace_norm;
    rep.leakage = computational_leakage(result, frame);
    rep.fidelity = fidelity(aligned, ideal_fsim(angles.theta, angles.phi));
    if (predicted && predicted->feasible()) {
        rep.theta_predicted = predicted->theta;
        rep.phi_predicted = predicted->phi;
        rep.fidelity_vs_predicted =
            fidelity(aligned, ideal_fsim(predicted->theta, predicted->phi));
    }
    return rep;
}

}  // namespace cfsim
