#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "densecode/gates.hpp"
#include "densecode/tensor.hpp"

namespace densecode {

struct KrausChannel {
    std::vector<cmatrix> operators;
    std::string label;
};

struct NoiseParams {
    double p = 0.0;  // amplitude-damping probability
    double q = 0.0;  // phase-damping probability
};

inline void validate_noise_params(const NoiseParams& params) {
    if (!(params.p >= 0.0 && params.p <= 1.0))
        throw std::invalid_argument("noise parameter p outside [0,1]");
    if (!(params.q >= 0.0 && params.q <= 1.0))
        throw std::invalid_argument("noise parameter q outside [0,1]");
}

// Max-entry deviation of sum K_i^dagger K_i from the identity.
inline double completeness_defect(const KrausChannel& channel) {
    if (channel.operators.empty())
        throw std::invalid_argument("completeness_defect: channel has no operators");
    const Eigen::Index d = channel.operators.front().rows();
    cmatrix acc = cmatrix::Zero(d, d);
    for (const cmatrix& k : channel.operators) acc += k.adjoint() * k;
    return (acc - cmatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

inline bool is_trace_preserving(const KrausChannel& channel,
                                double tol = kraus_completeness_tol) {
    return completeness_defect(channel) <= tol;
}

inline KrausChannel amplitude_damping(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("amplitude_damping: p outside [0,1]");
    cmatrix a0 = cmatrix::Zero(2, 2), a1 = cmatrix::Zero(2, 2);
    a0(0, 0) = 1.0;
    a0(1, 1) = std::sqrt(1.0 - p);
    a1(0, 1) = std::sqrt(p);
    return {{a0, a1}, "amplitude_damping"};
}

inline KrausChannel phase_damping(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("phase_damping: q outside [0,1]");
    cmatrix p0 = std::sqrt(1.0 - q) * cmatrix::Identity(2, 2);
    cmatrix p1 = cmatrix::Zero(2, 2), p2 = cmatrix::Zero(2, 2);
    p1(0, 0) = std::sqrt(q);
    p2(1, 1) = std::sqrt(q);
    return {{p0, p1, p2}, "phase_damping"};
}

// Symmetric composite of amplitude and phase damping,
// E(rho) = (AD(PD(rho)) + PD(AD(rho))) / 2, expressed as a single Kraus
// family of scaled operator products in both orders.
inline KrausChannel composite_channel(const NoiseParams& params) {
    validate_noise_params(params);
    const KrausChannel ad = amplitude_damping(params.p);
    const KrausChannel pd = phase_damping(params.q);
    const double w = 1.0 / std::numbers::sqrt2;
    KrausChannel out;
    out.label = "composite";
    for (const cmatrix& a : ad.operators)
        for (const cmatrix& f : pd.operators) out.operators.push_back(w * (a * f));
    for (const cmatrix& f : pd.operators)
        for (const cmatrix& a : ad.operators) out.operators.push_back(w * (f * a));
    return out;
}

// Kraus sum applied on the listed target qubits of a larger state.
inline cmatrix apply_channel(const KrausChannel& channel, const cmatrix& rho,
                             const std::vector<int>& targets) {
    if (channel.operators.empty())
        throw std::invalid_argument("apply_channel: channel has no operators");
    check_operator_dim(channel.operators.front(), targets.size());
    cmatrix out = cmatrix::Zero(rho.rows(), rho.cols());
    for (const cmatrix& k : channel.operators) out += conjugate_on(rho, k, targets);
    return out;
}

inline cmatrix composite_channel_apply(const NoiseParams& params, const cmatrix& rho,
                                       int target) {
    return apply_channel(composite_channel(params), rho, {target});
}

// Choi operator: (E x id) applied to the unnormalized maximally entangled
// operator sum_ij |i><j| x |i><j|.
inline cmatrix choi_matrix(const KrausChannel& channel) {
    if (channel.operators.empty())
        throw std::invalid_argument("choi_matrix: channel has no operators");
    const Eigen::Index d = channel.operators.front().rows();
    cvector omega = cvector::Zero(d * d);
    for (Eigen::Index i = 0; i < d; ++i) omega(i * d + i) = 1.0;
    cmatrix choi = cmatrix::Zero(d * d, d * d);
    const cmatrix eye = cmatrix::Identity(d, d);
    for (const cmatrix& k : channel.operators) {
        const cvector w = kron(k, eye) * omega;
        choi += w * w.adjoint();
    }
    return choi;
}

}  // namespace densecode
