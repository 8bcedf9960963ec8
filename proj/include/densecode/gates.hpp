#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "densecode/tensor.hpp"

namespace densecode {

inline int qubit_count(const cmatrix& m) {
    Eigen::Index d = m.rows();
    int n = 0;
    while ((Eigen::Index{1} << n) < d) ++n;
    if ((Eigen::Index{1} << n) != d || m.cols() != d)
        throw std::invalid_argument("qubit_count: dimension is not a power of two");
    return n;
}

inline cmatrix pauli_x_matrix() {
    cmatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline cmatrix pauli_y_matrix() {
    cmatrix m(2, 2);
    m << 0, complex(0, -1), complex(0, 1), 0;
    return m;
}

inline cmatrix pauli_z_matrix() {
    cmatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline cmatrix hadamard_matrix() {
    const double s = 1.0 / std::numbers::sqrt2;
    cmatrix m(2, 2);
    m << s, s, s, -s;
    return m;
}

inline cmatrix ry_matrix(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    cmatrix m(2, 2);
    m << c, -s, s, c;
    return m;
}

// Control is the first (more significant) of the gate's two qubits.
inline cmatrix cnot_matrix() {
    cmatrix m = cmatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}

inline cmatrix controlled_matrix(const cmatrix& u) {
    const Eigen::Index d = u.rows();
    cmatrix m = cmatrix::Zero(2 * d, 2 * d);
    m.topLeftCorner(d, d) = cmatrix::Identity(d, d);
    m.bottomRightCorner(d, d) = u;
    return m;
}

inline cmatrix swap_matrix() {
    cmatrix m = cmatrix::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
    return m;
}

inline cmatrix projector0() {
    cmatrix m = cmatrix::Zero(2, 2);
    m(0, 0) = 1;
    return m;
}

inline cmatrix projector1() {
    cmatrix m = cmatrix::Zero(2, 2);
    m(1, 1) = 1;
    return m;
}

// |0...0><0...0| on k qubits.
inline cmatrix zero_state(int k) {
    cmatrix m = cmatrix::Zero(Eigen::Index{1} << k, Eigen::Index{1} << k);
    m(0, 0) = 1;
    return m;
}

namespace detail {

struct TargetLayout {
    int n = 0;                      // total qubits
    int k = 0;                      // target qubits
    std::vector<long> offsets;      // index offset of each target-bit pattern
    std::vector<long> bases;        // indices with all target bits clear
};

inline TargetLayout target_layout(int n, const std::vector<int>& targets) {
    TargetLayout lay;
    lay.n = n;
    lay.k = static_cast<int>(targets.size());
    if (lay.k == 0) throw std::invalid_argument("target list empty");
    for (size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0 || targets[i] >= n)
            throw std::invalid_argument("target qubit out of range");
        for (size_t j = i + 1; j < targets.size(); ++j)
            if (targets[i] == targets[j])
                throw std::invalid_argument("duplicate target qubit");
    }
    const long sub = 1L << lay.k;
    lay.offsets.assign(sub, 0);
    for (long u = 0; u < sub; ++u)
        for (int j = 0; j < lay.k; ++j)
            if ((u >> (lay.k - 1 - j)) & 1) lay.offsets[u] |= 1L << (n - 1 - targets[j]);

    std::vector<int> free_shift;
    for (int q = n - 1; q >= 0; --q) {
        bool is_target = false;
        for (int t : targets) is_target |= (t == q);
        if (!is_target) free_shift.push_back(n - 1 - q);
    }
    const long rest = 1L << (n - lay.k);
    lay.bases.assign(rest, 0);
    for (long r = 0; r < rest; ++r)
        for (size_t b = 0; b < free_shift.size(); ++b)
            if ((r >> b) & 1) lay.bases[r] |= 1L << free_shift[b];
    return lay;
}

// m <- Op_emb * m, with op acting on the listed target qubits (targets[0] is
// the most-significant index of op's space).
inline void left_apply_inplace(cmatrix& m, const cmatrix& op, const TargetLayout& lay) {
    const long sub = 1L << lay.k;
    std::vector<complex> a(sub), b(sub);
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (long base : lay.bases) {
            for (long u = 0; u < sub; ++u) a[u] = m(base + lay.offsets[u], c);
            for (long u = 0; u < sub; ++u) {
                complex acc = 0.0;
                for (long v = 0; v < sub; ++v) acc += op(u, v) * a[v];
                b[u] = acc;
            }
            for (long u = 0; u < sub; ++u) m(base + lay.offsets[u], c) = b[u];
        }
}

// m <- m * Op_emb^dagger
inline void right_apply_adjoint_inplace(cmatrix& m, const cmatrix& op, const TargetLayout& lay) {
    const long sub = 1L << lay.k;
    std::vector<complex> a(sub), b(sub);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (long base : lay.bases) {
            for (long u = 0; u < sub; ++u) a[u] = m(r, base + lay.offsets[u]);
            for (long u = 0; u < sub; ++u) {
                complex acc = 0.0;
                for (long v = 0; v < sub; ++v) acc += a[v] * std::conj(op(u, v));
                b[u] = acc;
            }
            for (long u = 0; u < sub; ++u) m(r, base + lay.offsets[u]) = b[u];
        }
}

}  // namespace detail

inline void check_operator_dim(const cmatrix& op, size_t k) {
    if (op.rows() != op.cols() || op.rows() != (Eigen::Index{1} << k))
        throw std::invalid_argument("operator dimension does not match target count");
}

// Op_emb * m (rows transformed); used to compose circuit unitaries.
inline cmatrix left_apply(const cmatrix& m, const cmatrix& op, const std::vector<int>& targets) {
    const int n = qubit_count(m);
    check_operator_dim(op, targets.size());
    cmatrix out = m;
    detail::left_apply_inplace(out, op, detail::target_layout(n, targets));
    return out;
}

// Op_emb * rho * Op_emb^dagger for an arbitrary (not necessarily unitary) op.
inline cmatrix conjugate_on(const cmatrix& rho, const cmatrix& op, const std::vector<int>& targets) {
    const int n = qubit_count(rho);
    check_operator_dim(op, targets.size());
    const auto lay = detail::target_layout(n, targets);
    cmatrix out = rho;
    detail::left_apply_inplace(out, op, lay);
    detail::right_apply_adjoint_inplace(out, op, lay);
    return out;
}

inline cmatrix embed_operator(const cmatrix& op, const std::vector<int>& targets, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    return left_apply(cmatrix::Identity(dim, dim), op, targets);
}

// Re Tr(Op_emb * rho)
inline double expectation_value(const cmatrix& rho, const cmatrix& op, const std::vector<int>& targets) {
    const int n = qubit_count(rho);
    check_operator_dim(op, targets.size());
    const auto lay = detail::target_layout(n, targets);
    const long sub = 1L << lay.k;
    complex acc = 0.0;
    for (long base : lay.bases)
        for (long u = 0; u < sub; ++u)
            for (long v = 0; v < sub; ++v)
                acc += op(u, v) * rho(base + lay.offsets[v], base + lay.offsets[u]);
    return acc.real();
}

// CNOT conjugation as a pure index permutation (no arithmetic).
inline void apply_cnot_inplace(cmatrix& rho, int control, int target) {
    const int n = qubit_count(rho);
    if (control == target) throw std::invalid_argument("duplicate target qubit");
    if (control < 0 || control >= n || target < 0 || target >= n)
        throw std::invalid_argument("target qubit out of range");
    const long dim = rho.rows();
    const long cbit = 1L << (n - 1 - control), tbit = 1L << (n - 1 - target);
    for (long r = 0; r < dim; ++r) {
        if (!(r & cbit)) continue;
        const long r2 = r ^ tbit;
        if (r2 < r) continue;
        rho.row(r).swap(rho.row(r2));
    }
    for (long c = 0; c < dim; ++c) {
        if (!(c & cbit)) continue;
        const long c2 = c ^ tbit;
        if (c2 < c) continue;
        rho.col(c).swap(rho.col(c2));
    }
}

// R_Y conjugation specialised for the real 2x2 rotation.
inline void apply_ry_inplace(cmatrix& rho, double theta, int target) {
    const int n = qubit_count(rho);
    if (target < 0 || target >= n) throw std::invalid_argument("target qubit out of range");
    const double co = std::cos(theta / 2.0), si = std::sin(theta / 2.0);
    const long dim = rho.rows();
    const long tbit = 1L << (n - 1 - target);
    for (Eigen::Index c = 0; c < dim; ++c)
        for (long r = 0; r < dim; ++r) {
            if (r & tbit) continue;
            const long r1 = r | tbit;
            const complex a0 = rho(r, c), a1 = rho(r1, c);
            rho(r, c) = co * a0 - si * a1;
            rho(r1, c) = si * a0 + co * a1;
        }
    for (long c = 0; c < dim; ++c) {
        if (c & tbit) continue;
        const long c1 = c | tbit;
        for (long r = 0; r < dim; ++r) {
            const complex a0 = rho(r, c), a1 = rho(r, c1);
            rho(r, c) = co * a0 - si * a1;
            rho(r, c1) = si * a0 + co * a1;
        }
    }
}

// Result qubit j is input qubit perm[j]; perm must be a permutation of 0..n-1.
inline cmatrix permute_qubits(const cmatrix& rho, const std::vector<int>& perm) {
    const int n = qubit_count(rho);
    if (static_cast<int>(perm.size()) != n)
        throw std::invalid_argument("permute_qubits: wrong permutation length");
    std::vector<bool> seen(n, false);
    for (int p : perm) {
        if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("permute_qubits: not a permutation");
        seen[p] = true;
    }
    const long dim = rho.rows();
    std::vector<long> src(dim, 0);
    for (long i = 0; i < dim; ++i)
        for (int j = 0; j < n; ++j)
            if ((i >> (n - 1 - j)) & 1) src[i] |= 1L << (n - 1 - perm[j]);
    cmatrix out(dim, dim);
    for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c) out(r, c) = rho(src[r], src[c]);
    return out;
}

inline cmatrix append_fresh_qubits(const cmatrix& rho, int k) {
    return kron(rho, zero_state(k));
}

// Inserts k fresh |0> qubits immediately after position `pos`.
inline cmatrix insert_fresh_qubits(const cmatrix& rho, int pos, int k) {
    const int n = qubit_count(rho);
    if (pos < 0 || pos >= n) throw std::invalid_argument("insert_fresh_qubits: position out of range");
    cmatrix wide = append_fresh_qubits(rho, k);
    std::vector<int> perm(n + k);
    for (int j = 0; j <= pos; ++j) perm[j] = j;
    for (int j = 0; j < k; ++j) perm[pos + 1 + j] = n + j;
    for (int j = pos + 1; j < n; ++j) perm[j + k] = j;
    return permute_qubits(wide, perm);
}

inline cmatrix trace_out_qubits(const cmatrix& rho, const std::vector<int>& discard) {
    const int n = qubit_count(rho);
    std::vector<int> keep;
    for (int q = 0; q < n; ++q)
        if (std::find(discard.begin(), discard.end(), q) == discard.end()) keep.push_back(q);
    return partial_trace(rho, std::vector<int>(n, 2), keep);
}

inline cmatrix keep_qubits(const cmatrix& rho, const std::vector<int>& keep) {
    const int n = qubit_count(rho);
    return partial_trace(rho, std::vector<int>(n, 2), keep);
}

// Projects qubit `target` onto |outcome>; returns probability and the
// renormalized post-measurement state (unchanged input if probability ~ 0).
inline std::pair<double, cmatrix> project_qubit(const cmatrix& rho, int target, int outcome) {
    const cmatrix proj = outcome ? projector1() : projector0();
    cmatrix post = conjugate_on(rho, proj, {target});
    const double prob = post.trace().real();
    if (prob > prob_floor)
        post /= prob;
    else
        post = rho;
    return {std::max(0.0, prob), post};
}

}  // namespace densecode
