#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "densecode/gates.hpp"
#include "densecode/simplex.hpp"
#include "densecode/state.hpp"
#include "densecode/tensor.hpp"

namespace densecode {

struct MeasurementAngles {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2pi)
};

struct ClassicalCorrelations {
    double value = 0.0;
    MeasurementAngles angles;
};

struct CorrelationReport {
    double fidelity = 0.0;
    double qd = 0.0;
    double eof = 0.0;
    double mutual_info = 0.0;
    double classical_info = 0.0;
    double concurrence = 0.0;
};

inline void require_two_qubits(const cmatrix& rho, const char* where) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw std::invalid_argument(std::string(where) + ": expected a two-qubit state");
}

// Wootters concurrence from the spin-flipped matrix R = rho (Y x Y) rho* (Y x Y).
inline double concurrence(const cmatrix& rho) {
    require_two_qubits(rho, "concurrence");
    cmatrix yy = cmatrix::Zero(4, 4);
    yy(0, 3) = -1;
    yy(1, 2) = 1;
    yy(2, 1) = 1;
    yy(3, 0) = -1;
    const cmatrix r = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<cmatrix> solver(r, false);
    if (solver.info() != Eigen::Success)
        throw internal_error("concurrence: eigensolver failed");
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) lam[i] = std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

inline double eof_from_concurrence(double c) {
    c = std::clamp(c, 0.0, 1.0);
    if (c == 0.0) return 0.0;
    return binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0);
}

inline double entanglement_of_formation(const cmatrix& rho) {
    require_two_qubits(rho, "entanglement_of_formation");
    return eof_from_concurrence(concurrence(rho));
}

inline double mutual_information(const cmatrix& rho) {
    require_two_qubits(rho, "mutual_information");
    const std::vector<int> dims{2, 2};
    const double sa = von_neumann_entropy(partial_trace(rho, dims, {0}));
    const double sb = von_neumann_entropy(partial_trace(rho, dims, {1}));
    return sa + sb - von_neumann_entropy(rho);
}

namespace detail {

// Average conditional entropy of B after the projective measurement
// {P(theta,phi), I-P} on subsystem A, evaluated without allocations.
struct ConditionalEntropyObjective {
    Eigen::Matrix2cd b00, b01, b10, b11;  // 2x2 blocks of the two-qubit state

    explicit ConditionalEntropyObjective(const cmatrix& rho)
        : b00(rho.block<2, 2>(0, 0)),
          b01(rho.block<2, 2>(0, 2)),
          b10(rho.block<2, 2>(2, 0)),
          b11(rho.block<2, 2>(2, 2)) {}

    static double entropy2(const Eigen::Matrix2cd& sigma, double prob) {
        const double a = sigma(0, 0).real() / prob;
        const double d = sigma(1, 1).real() / prob;
        const complex off = (sigma(0, 1) + std::conj(sigma(1, 0))) / (2.0 * prob);
        const double tr = a + d;
        const double det = a * d - std::norm(off);
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
        double s = 0.0;
        for (double lam : {(tr + disc) / 2.0, (tr - disc) / 2.0})
            if (lam > 0.0) s -= lam * std::log2(lam);
        return s;
    }

    double operator()(double theta, double phi) const {
        const double ct = std::cos(theta / 2.0), st = std::sin(theta / 2.0);
        const double c2 = ct * ct, s2 = st * st;
        const complex off = 0.5 * std::sin(theta) * std::exp(complex(0.0, -phi));
        // Unnormalized conditional states on B:
        //   sigma_k = sum_{c,d} Pi_k(d,c) * block(c,d)
        const Eigen::Matrix2cd sigma0 =
            c2 * b00 + std::conj(off) * b01 + off * b10 + s2 * b11;
        const Eigen::Matrix2cd sigma1 =
            s2 * b00 - std::conj(off) * b01 - off * b10 + c2 * b11;
        double total = 0.0;
        const double p0 = sigma0(0, 0).real() + sigma0(1, 1).real();
        const double p1 = sigma1(0, 0).real() + sigma1(1, 1).real();
        if (p0 > prob_floor) total += p0 * entropy2(sigma0, p0);
        if (p1 > prob_floor) total += p1 * entropy2(sigma1, p1);
        return total;
    }
};

inline MeasurementAngles canonical_angles(double theta, double phi) {
    const double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0) theta += two_pi;
    if (theta > std::numbers::pi) {
        theta = two_pi - theta;
        phi += std::numbers::pi;
    }
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    return {theta, phi};
}

}  // namespace detail

// J(A:B) = S(rho_B) - min over projective measurements on A of the average
// conditional entropy of B.  Coarse 64x128 grid, then simplex refinement;
// grid ties resolve to the lowest theta, then the lowest phi.
inline ClassicalCorrelations classical_correlations(const cmatrix& rho) {
    require_two_qubits(rho, "classical_correlations");
    const detail::ConditionalEntropyObjective objective(rho);

    constexpr int theta_steps = 64, phi_steps = 128;
    const double pi = std::numbers::pi;
    double best_f = std::numeric_limits<double>::infinity();
    double best_theta = 0.0, best_phi = 0.0;
    for (int i = 0; i < theta_steps; ++i) {
        const double theta = pi * i / (theta_steps - 1);
        for (int j = 0; j < phi_steps; ++j) {
            const double phi = 2.0 * pi * j / phi_steps;
            const double f = objective(theta, phi);
            if (f < best_f) {
                best_f = f;
                best_theta = theta;
                best_phi = phi;
            }
        }
    }

    const auto wrapped = [&](const std::vector<double>& x) { return objective(x[0], x[1]); };
    const SimplexResult refined = nelder_mead(
        wrapped,
        initial_simplex({best_theta, best_phi}, {pi / (theta_steps - 1), 2.0 * pi / phi_steps}),
        1e-8);
    if (refined.fx < best_f) {
        best_f = refined.fx;
        best_theta = refined.x[0];
        best_phi = refined.x[1];
    }

    const double sb = von_neumann_entropy(partial_trace(rho, {2, 2}, {1}));
    ClassicalCorrelations out;
    out.value = std::max(0.0, sb - best_f);
    out.angles = detail::canonical_angles(best_theta, best_phi);
    return out;
}

inline double quantum_discord(const cmatrix& rho) {
    require_two_qubits(rho, "quantum_discord");
    return std::max(0.0, mutual_information(rho) - classical_correlations(rho).value);
}

// All two-qubit metrics of one state; fidelity is taken against Phi+.
inline CorrelationReport correlation_report(const cmatrix& rho) {
    require_two_qubits(rho, "correlation_report");
    CorrelationReport rep;
    rep.fidelity = fidelity_with_pure(bell_state(BellKind::phi_plus), rho);
    rep.mutual_info = mutual_information(rho);
    rep.classical_info = classical_correlations(rho).value;
    rep.qd = std::max(0.0, rep.mutual_info - rep.classical_info);
    rep.concurrence = concurrence(rho);
    rep.eof = eof_from_concurrence(rep.concurrence);
    return rep;
}

}  // namespace densecode
