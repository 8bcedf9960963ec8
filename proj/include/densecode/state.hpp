#pragma once

#include <cmath>
#include <numbers>

#include "densecode/tensor.hpp"

namespace densecode {

enum class BellKind { phi_plus, phi_minus, psi_plus, psi_minus };

inline cvector bell_ket(BellKind kind) {
    const double s = 1.0 / std::numbers::sqrt2;
    cvector v = cvector::Zero(4);
    switch (kind) {
        case BellKind::phi_plus:  v(0) = s; v(3) = s; break;
        case BellKind::phi_minus: v(0) = s; v(3) = -s; break;
        case BellKind::psi_plus:  v(1) = s; v(2) = s; break;
        case BellKind::psi_minus: v(1) = s; v(2) = -s; break;
    }
    return v;
}

inline cmatrix bell_state(BellKind kind) {
    const cvector v = bell_ket(kind);
    return v * v.adjoint();
}

inline double purity(const cmatrix& rho) { return (rho * rho).trace().real(); }

// Validity check for density matrices: hermitian, unit trace, PSD.
inline bool is_density_matrix(const cmatrix& rho) {
    if (rho.rows() != rho.cols()) return false;
    if (!is_hermitian(rho)) return false;
    if (std::abs(rho.trace().real() - 1.0) > trace_tol || std::abs(rho.trace().imag()) > trace_tol)
        return false;
    Eigen::SelfAdjointEigenSolver<cmatrix> solver((rho + rho.adjoint()) / 2.0);
    return solver.eigenvalues().minCoeff() >= -eigenvalue_clamp_tol;
}

inline void assert_density_matrix(const cmatrix& rho, const char* where) {
    if (!is_density_matrix(rho))
        throw internal_error(std::string(where) + ": state is not a valid density matrix");
}

// Uhlmann fidelity, squared convention: (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double fidelity(const cmatrix& rho, const cmatrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("fidelity: dimension mismatch");
    const cmatrix root = matrix_sqrt(rho);
    const cmatrix inner = root * sigma * root;
    // Fresh matrix: assigning a self-adjoint sum back into its own operand
    // aliases in Eigen.
    const cmatrix sym = (inner + inner.adjoint()) / 2.0;
    const double tr = matrix_sqrt(sym).trace().real();
    return std::clamp(tr * tr, 0.0, 1.0);
}

// Specialization of the fidelity to a pure reference: <psi| sigma |psi>.
inline double fidelity_with_pure(const cmatrix& pure_ref, const cmatrix& sigma) {
    if (pure_ref.rows() != sigma.rows() || pure_ref.cols() != sigma.cols())
        throw std::invalid_argument("fidelity_with_pure: dimension mismatch");
    if (std::abs(purity(pure_ref) - 1.0) > 1e-9)
        throw std::invalid_argument("fidelity_with_pure: reference state is not pure");
    return std::clamp((pure_ref * sigma).trace().real(), 0.0, 1.0);
}

// Von Neumann entropy in bits; eigenvalues <= 0 contribute zero.
inline double von_neumann_entropy(const cmatrix& rho) {
    const EigDecomposition eig = hermitian_eig(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        const double lam = eig.values[i];
        if (lam > 0.0) s -= lam * std::log2(lam);
    }
    return std::max(0.0, s);
}

inline double binary_entropy(double x) {
    double s = 0.0;
    if (x > 0.0) s -= x * std::log2(x);
    if (x < 1.0) s -= (1.0 - x) * std::log2(1.0 - x);
    return std::max(0.0, s);
}

}  // namespace densecode
