#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "densecode/channels.hpp"
#include "densecode/gates.hpp"
#include "densecode/metrics.hpp"
#include "densecode/simplex.hpp"
#include "densecode/state.hpp"

namespace densecode {

struct PurificationAngles {
    double theta1 = 0.0;
    double theta2 = 0.0;
};

struct DistillationOutcome {
    cmatrix state;  // surviving pair, empty when success_prob is 0
    double success_prob = 0.0;
};

struct NoiseEstimate {
    double p_hat = 0.0;
    double q_hat = 0.0;
    double residual = 0.0;  // distance to the forward map in (QD, EoF) space
};

inline PurificationAngles canonical_purification_angles(PurificationAngles a) {
    const auto wrap = [](double t) {
        if (!std::isfinite(t)) throw std::invalid_argument("purification angle must be finite");
        return std::remainder(t, 2.0 * std::numbers::pi);  // [-pi, pi]
    };
    return {wrap(a.theta1), wrap(a.theta2)};
}

// One recursion step of the distillation map on the dominant-component
// fidelity, with its success probability.
inline std::pair<double, double> dejmps_fidelity_recursion(double f) {
    if (!(f >= 0.0 && f <= 1.0))
        throw std::invalid_argument("dejmps_fidelity_recursion: fidelity must be in [0,1]");
    const double g = 1.0 - f;
    const double ps = f * f + (2.0 / 3.0) * f * g + (5.0 / 9.0) * g * g;
    const double fn = (f * f + g * g / 9.0) / ps;
    return {fn, ps};
}

// Two-pair distillation circuit.  Qubits are laid out (A1, B1, A2, B2):
// R_Y(theta) on the A side, R_Y(-theta) on the B side, pairwise CNOTs from
// pair one onto pair two, then pair two is measured and kept only on equal
// outcomes.  The survivor comes out aligned with the psi+ Bell state, so a
// final X on its A qubit returns it to the phi+ frame.
inline DistillationOutcome dejmps_round(const cmatrix& pair1, const cmatrix& pair2,
                                        double theta = std::numbers::pi / 2) {
    if (pair1.rows() != 4 || pair1.cols() != 4 || pair2.rows() != 4 || pair2.cols() != 4)
        throw std::invalid_argument("dejmps_round: inputs must be two-qubit states");
    if (!std::isfinite(theta)) throw std::invalid_argument("dejmps_round: theta must be finite");

    cmatrix joint = kron(pair1, pair2);
    apply_ry_inplace(joint, theta, 0);
    apply_ry_inplace(joint, -theta, 1);
    apply_ry_inplace(joint, theta, 2);
    apply_ry_inplace(joint, -theta, 3);
    apply_cnot_inplace(joint, 0, 2);
    apply_cnot_inplace(joint, 1, 3);

    DistillationOutcome out;
    cmatrix kept = cmatrix::Zero(16, 16);
    for (int o = 0; o < 2; ++o) {
        const auto [pa, after_a] = project_qubit(joint, 2, o);
        if (pa <= prob_floor) continue;
        const auto [pb, after_b] = project_qubit(after_a, 3, o);
        if (pb <= prob_floor) continue;
        out.success_prob += pa * pb;
        kept += (pa * pb) * after_b;
    }
    if (out.success_prob <= prob_floor) {
        out.success_prob = 0.0;
        return out;
    }
    kept /= out.success_prob;
    cmatrix survivor = keep_qubits(kept, {0, 1});
    out.state = conjugate_on(survivor, pauli_x_matrix(), {0});
    return out;
}

namespace detail {

// Eight-qubit purification circuit: data qubits 0..3 hold the two pairs
// (0,1) and (2,3), ancillas 4..7 start in |0>.  CNOTs record pair parities
// onto the ancillas before and between the rotation layers; theta1 drives
// the transmitted qubits (0 and 2), theta2 the kept qubits (1 and 3) - the
// two sides see different noise, hence separate angles.
struct AdaptiveGate {
    bool is_cnot;
    int q1;     // control (CNOT) or rotation target
    int q2;     // CNOT target, unused otherwise
    double c1;  // rotation angle = c1*theta1 + c2*theta2
    double c2;
};

inline const std::array<AdaptiveGate, 16>& adaptive_gate_list() {
    static const std::array<AdaptiveGate, 16> gates{{
        {true, 0, 4, 0, 0},
        {false, 0, -1, 1, 0},
        {true, 2, 6, 0, 0},
        {true, 1, 4, 0, 0},
        {false, 1, -1, 0, 1},
        {false, 2, -1, 1, 0},
        {true, 3, 6, 0, 0},
        {true, 0, 5, 0, 0},
        {false, 0, -1, -1, 0},
        {false, 3, -1, 0, 1},
        {true, 2, 7, 0, 0},
        {true, 1, 5, 0, 0},
        {false, 1, -1, 0, -1},
        {false, 2, -1, -1, 0},
        {true, 3, 7, 0, 0},
        {false, 3, -1, 0, -1},
    }};
    return gates;
}

inline void apply_adaptive_circuit(cmatrix& rho, const PurificationAngles& a) {
    for (const AdaptiveGate& g : adaptive_gate_list()) {
        if (g.is_cnot)
            apply_cnot_inplace(rho, g.q1, g.q2);
        else
            apply_ry_inplace(rho, g.c1 * a.theta1 + g.c2 * a.theta2, g.q1);
    }
}

}  // namespace detail

// Dense 256x256 form of the purification circuit; mainly a verification
// handle, the state-level routines apply the gates directly.
inline cmatrix adaptive_unitary(const PurificationAngles& angles) {
    if (!std::isfinite(angles.theta1) || !std::isfinite(angles.theta2))
        throw std::invalid_argument("adaptive_unitary: angles must be finite");
    cmatrix u = cmatrix::Identity(256, 256);
    for (const detail::AdaptiveGate& g : detail::adaptive_gate_list()) {
        if (g.is_cnot)
            u = left_apply(u, cnot_matrix(), {g.q1, g.q2});
        else
            u = left_apply(u, ry_matrix(g.c1 * angles.theta1 + g.c2 * angles.theta2), {g.q1});
    }
    return u;
}

// Deterministic purification map: adjoin four |0> ancillas, run the circuit,
// drop the ancillas.  No post-selection, both pairs survive.  With
// measure_ancillas set, the ancillas are read out (non-selectively) before
// being dropped; since discarding a register commutes with measuring it,
// both variants give the same map and tests pin that equality.
inline cmatrix adaptive_purify(const cmatrix& two_pairs, const PurificationAngles& angles,
                               bool measure_ancillas = false) {
    if (two_pairs.rows() != 16 || two_pairs.cols() != 16)
        throw std::invalid_argument("adaptive_purify: input must be a four-qubit state");
    if (!std::isfinite(angles.theta1) || !std::isfinite(angles.theta2))
        throw std::invalid_argument("adaptive_purify: angles must be finite");
    cmatrix full = kron(two_pairs, zero_state(4));
    detail::apply_adaptive_circuit(full, angles);
    if (measure_ancillas) {
        // Ancilla qubits are the four least significant index bits.
        for (Eigen::Index r = 0; r < 256; ++r)
            for (Eigen::Index c = 0; c < 256; ++c)
                if ((r & 15) != (c & 15)) full(r, c) = complex{0.0, 0.0};
    }
    return keep_qubits(full, {0, 1, 2, 3});
}

// Mean fidelity of the two pairs (0,1) and (2,3) against phi+.
inline double mean_pair_fidelity(const cmatrix& four_qubit) {
    if (four_qubit.rows() != 16 || four_qubit.cols() != 16)
        throw std::invalid_argument("mean_pair_fidelity: input must be a four-qubit state");
    const cmatrix ref = bell_state(BellKind::phi_plus);
    const double f1 = fidelity_with_pure(ref, keep_qubits(four_qubit, {0, 1}));
    const double f2 = fidelity_with_pure(ref, keep_qubits(four_qubit, {2, 3}));
    return 0.5 * (f1 + f2);
}

// Forward map samples (p, q) -> (QD, EoF) on a rectangular grid, row-major
// with p as the outer axis.
struct MetricTable {
    std::vector<double> ps, qs;
    std::vector<double> qd, eof;

    std::size_t index(std::size_t i, std::size_t j) const { return i * qs.size() + j; }
};

inline MetricTable build_metric_table(int p_steps = 51, int q_steps = 51) {
    if (p_steps < 2 || q_steps < 2)
        throw std::invalid_argument("build_metric_table: need at least 2 steps per axis");
    MetricTable t;
    t.ps.resize(static_cast<std::size_t>(p_steps));
    t.qs.resize(static_cast<std::size_t>(q_steps));
    for (int i = 0; i < p_steps; ++i) t.ps[static_cast<std::size_t>(i)] = i / (p_steps - 1.0);
    for (int j = 0; j < q_steps; ++j) t.qs[static_cast<std::size_t>(j)] = j / (q_steps - 1.0);
    t.qd.resize(t.ps.size() * t.qs.size());
    t.eof.resize(t.ps.size() * t.qs.size());
    const cmatrix bell = bell_state(BellKind::phi_plus);
    for (std::size_t i = 0; i < t.ps.size(); ++i)
        for (std::size_t j = 0; j < t.qs.size(); ++j) {
            const cmatrix state = composite_channel_apply({t.ps[i], t.qs[j]}, bell, 0);
            t.qd[t.index(i, j)] = quantum_discord(state);
            t.eof[t.index(i, j)] = entanglement_of_formation(state);
        }
    return t;
}

inline const MetricTable& default_metric_table() {
    static const MetricTable table = build_metric_table();
    return table;
}

namespace detail {

inline void validate_metric_table(const MetricTable& t) {
    if (t.ps.size() < 2 || t.qs.size() < 2 || t.qd.size() != t.ps.size() * t.qs.size() ||
        t.eof.size() != t.qd.size())
        throw std::invalid_argument("metric table is empty or inconsistently sized");
    const auto check_axis = [](const std::vector<double>& axis) {
        for (std::size_t k = 1; k < axis.size(); ++k) {
            const double gap = axis[k] - axis[k - 1];
            if (!(gap > 0.0) || gap > 0.02 + 1e-9)
                throw std::invalid_argument("metric table grid must ascend in steps <= 0.02");
        }
    };
    check_axis(t.ps);
    check_axis(t.qs);
}

struct BilinearPoint {
    double qd, eof;        // interpolated forward map
    double dqd_dp, dqd_dq;  // local partials
    double deof_dp, deof_dq;
};

inline BilinearPoint bilinear_at(const MetricTable& t, double p, double q) {
    const auto cell = [](const std::vector<double>& axis, double x) {
        std::size_t lo = 0;
        while (lo + 2 < axis.size() && x >= axis[lo + 1]) ++lo;
        return lo;
    };
    const std::size_t i = cell(t.ps, p), j = cell(t.qs, q);
    const double dp = t.ps[i + 1] - t.ps[i], dq = t.qs[j + 1] - t.qs[j];
    const double u = (p - t.ps[i]) / dp, v = (q - t.qs[j]) / dq;
    const auto mix = [&](const std::vector<double>& f) {
        const double f00 = f[t.index(i, j)], f01 = f[t.index(i, j + 1)];
        const double f10 = f[t.index(i + 1, j)], f11 = f[t.index(i + 1, j + 1)];
        const double val = (1 - u) * (1 - v) * f00 + (1 - u) * v * f01 + u * (1 - v) * f10 +
                           u * v * f11;
        const double d_dp = ((1 - v) * (f10 - f00) + v * (f11 - f01)) / dp;
        const double d_dq = ((1 - u) * (f01 - f00) + u * (f11 - f10)) / dq;
        return std::array<double, 3>{val, d_dp, d_dq};
    };
    const auto a = mix(t.qd);
    const auto b = mix(t.eof);
    return {a[0], b[0], a[1], a[2], b[1], b[2]};
}

}  // namespace detail

// Inverts the forward map at a measured (QD, EoF) point: nearest grid node
// first (ties toward smaller p, then smaller q), then a few Newton steps on
// the bilinear surrogate, kept only when they reduce the residual.
inline NoiseEstimate estimate_noise(double qd, double eof, const MetricTable& table) {
    detail::validate_metric_table(table);
    if (!std::isfinite(qd) || !std::isfinite(eof))
        throw std::invalid_argument("estimate_noise: metrics must be finite");

    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < table.ps.size(); ++i)
        for (std::size_t j = 0; j < table.qs.size(); ++j) {
            const double dq = table.qd[table.index(i, j)] - qd;
            const double de = table.eof[table.index(i, j)] - eof;
            const double d2 = dq * dq + de * de;
            if (d2 < best) {
                best = d2;
                bi = i;
                bj = j;
            }
        }
    const double node_res = std::sqrt(best);

    double p = table.ps[bi], q = table.qs[bj];
    for (int iter = 0; iter < 8; ++iter) {
        const auto loc = detail::bilinear_at(table, p, q);
        const double r1 = loc.qd - qd, r2 = loc.eof - eof;
        const double det = loc.dqd_dp * loc.deof_dq - loc.dqd_dq * loc.deof_dp;
        if (std::abs(det) < 1e-14) break;
        const double step_p = (loc.deof_dq * r1 - loc.dqd_dq * r2) / det;
        const double step_q = (loc.dqd_dp * r2 - loc.deof_dp * r1) / det;
        p = std::clamp(p - step_p, table.ps.front(), table.ps.back());
        q = std::clamp(q - step_q, table.qs.front(), table.qs.back());
    }
    const auto fin = detail::bilinear_at(table, p, q);
    const double refined_res = std::hypot(fin.qd - qd, fin.eof - eof);

    if (refined_res < node_res) return {p, q, refined_res};
    return {table.ps[bi], table.qs[bj], node_res};
}

struct AngleOptimum {
    PurificationAngles angles;
    double fidelity = 0.0;
};

namespace detail {

inline double purification_objective(const cmatrix& padded, double t1, double t2) {
    cmatrix work = padded;
    apply_adaptive_circuit(work, {t1, t2});
    return mean_pair_fidelity(keep_qubits(work, {0, 1, 2, 3}));
}

}  // namespace detail

// Picks circuit angles for the estimated channel by maximizing the mean
// pair fidelity: 33x33 grid over [-pi,pi]^2, then simplex refinement.  Grid
// ties inside a 1e-12 band prefer the smaller |theta1|+|theta2| (so the
// do-nothing angles win when noise vanishes), earliest grid point after
// that.  Pure function of the estimate.
inline AngleOptimum optimize_angles(const NoiseEstimate& noise) {
    if (!(noise.p_hat >= 0.0 && noise.p_hat <= 1.0) || !(noise.q_hat >= 0.0 && noise.q_hat <= 1.0))
        throw std::invalid_argument("optimize_angles: estimate outside the unit square");

    const cmatrix pair =
        composite_channel_apply({noise.p_hat, noise.q_hat}, bell_state(BellKind::phi_plus), 0);
    const cmatrix padded = kron(kron(pair, pair), zero_state(4));

    constexpr int steps = 33;
    const double lo = -std::numbers::pi, span = 2.0 * std::numbers::pi;
    constexpr double tie = 1e-12;
    double best_f = -std::numeric_limits<double>::infinity();
    double best_t1 = 0.0, best_t2 = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double t1 = lo + span * i / (steps - 1);
        for (int j = 0; j < steps; ++j) {
            const double t2 = lo + span * j / (steps - 1);
            const double f = detail::purification_objective(padded, t1, t2);
            if (f > best_f + tie) {
                best_f = f;
                best_t1 = t1;
                best_t2 = t2;
            } else if (f > best_f - tie &&
                       std::abs(t1) + std::abs(t2) + 1e-15 < std::abs(best_t1) + std::abs(best_t2)) {
                best_f = std::max(best_f, f);
                best_t1 = t1;
                best_t2 = t2;
            }
        }
    }

    const auto negated = [&](const std::vector<double>& x) {
        return -detail::purification_objective(padded, x[0], x[1]);
    };
    const double h = span / (steps - 1);
    const SimplexResult refined =
        nelder_mead(negated, initial_simplex({best_t1, best_t2}, {h, h}), 1e-6);
    if (-refined.fx > best_f) {
        best_f = -refined.fx;
        best_t1 = refined.x[0];
        best_t2 = refined.x[1];
    }

    AngleOptimum out;
    out.angles = canonical_purification_angles({best_t1, best_t2});
    out.fidelity = best_f;
    return out;
}

}  // namespace densecode
