#pragma once

#include <cstdint>
#include <random>

#include "densecode/densecode.hpp"

namespace testutil {

using densecode::cmatrix;
using densecode::complex;
using densecode::cvector;

inline cmatrix ginibre(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    cmatrix g(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = complex(normal(rng), normal(rng));
    return g;
}

// Full-rank random density matrix, deterministic per seed.
inline cmatrix random_density(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const cmatrix g = ginibre(dim, rng);
    cmatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return rho;
}

inline cmatrix random_pure(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    cvector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = complex(normal(rng), normal(rng));
    v.normalize();
    return v * v.adjoint();
}

// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal
// phases divided out.
inline cmatrix random_unitary(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const cmatrix g = ginibre(dim, rng);
    Eigen::HouseholderQR<cmatrix> qr(g);
    cmatrix q = qr.householderQ();
    const cmatrix r = qr.matrixQR();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const complex d = r(i, i);
        q.col(i) *= (std::abs(d) > 0.0) ? d / std::abs(d) : complex(1.0, 0.0);
    }
    return q;
}

// Isotropic mixture w * phi+ + (1 - w) * I/4.
inline cmatrix werner_state(double w) {
    return w * densecode::bell_state(densecode::BellKind::phi_plus) +
           (1.0 - w) * 0.25 * cmatrix::Identity(4, 4);
}

// Same family, parameterized by its overlap against phi+.
inline cmatrix werner(double fidelity) {
    return werner_state((4.0 * fidelity - 1.0) / 3.0);
}

inline double min_eigenvalue(const cmatrix& m) {
    Eigen::SelfAdjointEigenSolver<cmatrix> solver((m + m.adjoint()) / 2.0);
    return solver.eigenvalues().minCoeff();
}

}  // namespace testutil
