#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace densecode {

using complex = std::complex<double>;
using cmatrix = Eigen::MatrixXcd;
using cvector = Eigen::VectorXcd;
using rvector = Eigen::VectorXd;

// Shared numerical tolerances.
inline constexpr double hermiticity_tol = 1e-10;
inline constexpr double reconstruction_tol = 1e-9;
inline constexpr double trace_tol = 1e-9;
inline constexpr double kraus_completeness_tol = 1e-12;
inline constexpr double choi_psd_tol = 1e-10;
inline constexpr double eigenvalue_clamp_tol = 1e-10;
inline constexpr double prob_floor = 1e-12;

// Raised when a computation violates an internal contract (as opposed to
// std::invalid_argument, which signals bad caller input).
struct internal_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_hermitian(const cmatrix& m, double tol = hermiticity_tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline cmatrix kron(const cmatrix& a, const cmatrix& b) {
    cmatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

// Traces out every subsystem not listed in `keep`.  Subsystem 0 is the
// most-significant tensor factor.  `keep` must be strictly increasing and
// non-empty; the kept subsystems stay in their original order.
inline cmatrix partial_trace(const cmatrix& m, const std::vector<int>& dims,
                             const std::vector<int>& keep) {
    const int n = static_cast<int>(dims.size());
    long total = 1;
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("partial_trace: subsystem dim < 1");
        total *= d;
    }
    if (m.rows() != m.cols() || m.rows() != total)
        throw std::invalid_argument("partial_trace: matrix dim does not match subsystem dims");
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep list empty");
    for (size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 0 || keep[i] >= n)
            throw std::invalid_argument("partial_trace: keep index out of range");
        if (i > 0 && keep[i] <= keep[i - 1])
            throw std::invalid_argument("partial_trace: keep list not strictly increasing");
    }

    std::vector<long> stride(n, 1);
    for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

    std::vector<int> traced;
    for (int i = 0; i < n; ++i)
        if (std::find(keep.begin(), keep.end(), i) == keep.end()) traced.push_back(i);

    long keep_dim = 1, trace_dim = 1;
    for (int i : keep) keep_dim *= dims[i];
    for (int i : traced) trace_dim *= dims[i];

    // Offset of a flattened kept (resp. traced) multi-index inside the full index.
    auto offsets = [&](const std::vector<int>& subs) {
        long count = 1;
        for (int s : subs) count *= dims[s];
        std::vector<long> off(count, 0);
        for (long idx = 0; idx < count; ++idx) {
            long rem = idx;
            for (int i = static_cast<int>(subs.size()) - 1; i >= 0; --i) {
                long digit = rem % dims[subs[i]];
                rem /= dims[subs[i]];
                off[idx] += digit * stride[subs[i]];
            }
        }
        return off;
    };
    const std::vector<long> keep_off = offsets(keep);
    const std::vector<long> trace_off = offsets(traced);

    cmatrix out = cmatrix::Zero(keep_dim, keep_dim);
    for (long r = 0; r < keep_dim; ++r)
        for (long c = 0; c < keep_dim; ++c) {
            complex acc = 0.0;
            for (long t = 0; t < trace_dim; ++t)
                acc += m(keep_off[r] + trace_off[t], keep_off[c] + trace_off[t]);
            out(r, c) = acc;
        }
    return out;
}

struct EigDecomposition {
    rvector values;    // descending
    cmatrix vectors;   // column i pairs with values[i]
};

inline EigDecomposition hermitian_eig(const cmatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("hermitian_eig: matrix not square");
    if (!is_hermitian(m))
        throw std::invalid_argument("hermitian_eig: matrix not hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<cmatrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw internal_error("hermitian_eig: eigensolver failed to converge");
    EigDecomposition out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

// Principal square root of a hermitian PSD matrix.  Eigenvalues in
// [-eigenvalue_clamp_tol, 0) are treated as numerical noise and clamped.
inline cmatrix matrix_sqrt(const cmatrix& m) {
    EigDecomposition eig = hermitian_eig(m);
    rvector lam = eig.values;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam[i] < -eigenvalue_clamp_tol)
            throw internal_error("matrix_sqrt: matrix has negative eigenvalue " +
                                 std::to_string(lam[i]));
        lam[i] = std::sqrt(std::max(0.0, lam[i]));
    }
    return eig.vectors * lam.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace densecode
