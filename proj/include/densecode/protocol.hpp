#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>

#include "densecode/channels.hpp"
#include "densecode/metrics.hpp"
#include "densecode/purification.hpp"
#include "densecode/qec.hpp"
#include "densecode/state.hpp"

namespace densecode {

struct Message {
    int i = 0;
    int j = 0;
    auto operator<=>(const Message&) const = default;
};

inline void validate_message(Message msg) {
    if ((msg.i != 0 && msg.i != 1) || (msg.j != 0 && msg.j != 1))
        throw std::invalid_argument("message bits must be 0 or 1");
}

inline std::array<Message, 4> all_messages() {
    return {Message{0, 0}, Message{0, 1}, Message{1, 0}, Message{1, 1}};
}

struct ProtocolConfig {
    NoiseParams noise{};
    bool use_qec = false;
    bool use_adaptive_purification = false;
    int pilot_count = 1;
    int shots = 1;
    std::uint64_t seed = 42;
};

struct ProtocolResult {
    std::map<Message, double> decoded_distribution;
    std::map<Message, long> sampled_counts;
    double bell_fidelity = 0.0;
    double capacity = 0.0;
    CorrelationReport pilot_metrics;
    std::optional<PurificationAngles> chosen_angles;
};

// Writes the two-bit message into the target qubit as Z^i X^j.
inline cmatrix encode_message(const cmatrix& rho, Message msg, int target) {
    validate_message(msg);
    if (msg.i == 0 && msg.j == 0) {
        detail::target_layout(qubit_count(rho), {target});  // range check only
        return rho;
    }
    cmatrix u = cmatrix::Identity(2, 2);
    if (msg.j) u = pauli_x_matrix() * u;
    if (msg.i) u = pauli_z_matrix() * u;
    return conjugate_on(rho, u, {target});
}

// Decoding measurement: CNOT then Hadamard on the first qubit maps the four
// Bell states onto the computational basis, index i*2+j.
inline std::map<Message, double> bell_measure(const cmatrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw std::invalid_argument("bell_measure: expected a two-qubit state");
    cmatrix work = rho;
    apply_cnot_inplace(work, 0, 1);
    work = conjugate_on(work, hadamard_matrix(), {0});
    std::map<Message, double> out;
    for (const Message m : all_messages())
        out[m] = std::max(0.0, work(m.i * 2 + m.j, m.i * 2 + m.j).real());
    return out;
}

// Dense-coding capacity in bits with Alice's qubit first: 1 + S(B) - S(AB).
inline double channel_capacity(const cmatrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw std::invalid_argument("channel_capacity: expected a two-qubit state");
    return 1.0 + von_neumann_entropy(keep_qubits(rho, {1})) - von_neumann_entropy(rho);
}

// Full pipeline: share phi+, encode the message on the transmitted qubit,
// push it through the noise (inside the five-qubit code when enabled, bare
// otherwise), optionally purify against the pilot-estimated channel, then
// decode.  Exact density-matrix evolution throughout; the seed only drives
// the per-shot readout sampling.
inline ProtocolResult run_protocol(const ProtocolConfig& config, Message msg) {
    validate_noise_params(config.noise);
    validate_message(msg);
    if (config.pilot_count < 1)
        throw std::invalid_argument("run_protocol: pilot_count must be >= 1");
    if (config.shots < 1) throw std::invalid_argument("run_protocol: shots must be >= 1");

    ProtocolResult result;

    // Pilot pairs: fresh phi+ through the bare channel.  Exact metrics are
    // identical across pilots, so one evaluation stands for the average.
    const cmatrix bell = bell_state(BellKind::phi_plus);
    const cmatrix pilot = composite_channel_apply(config.noise, bell, 0);
    result.pilot_metrics = correlation_report(pilot);

    const cmatrix ideal = encode_message(bell, msg, 0);

    cmatrix recv;
    if (config.use_qec) {
        const StabilizerCode& code = five_qubit_code();
        cmatrix block = encode(code, encode_message(bell, msg, 0), 0);  // (c0..c4, Bob)
        for (int k = 0; k < 5; ++k) block = composite_channel_apply(config.noise, block, k);
        recv = cmatrix::Zero(4, 4);
        for (const SyndromeBranch& branch : syndrome_branches(code, block, 0)) {
            if (branch.probability <= prob_floor) continue;
            const cmatrix fixed = correct(code, branch.state, branch.syndrome, 0);
            recv += branch.probability * decode(code, fixed, 0);
        }
    } else {
        recv = composite_channel_apply(config.noise, encode_message(bell, msg, 0), 0);
    }

    cmatrix measured_pair;
    if (config.use_adaptive_purification) {
        const NoiseEstimate estimate =
            estimate_noise(result.pilot_metrics.qd, result.pilot_metrics.eof, default_metric_table());
        const AngleOptimum opt = optimize_angles(estimate);
        result.chosen_angles = opt.angles;
        const cmatrix purified = adaptive_purify(kron(recv, recv), opt.angles);
        const double f1 = fidelity_with_pure(ideal, keep_qubits(purified, {0, 1}));
        const double f2 = fidelity_with_pure(ideal, keep_qubits(purified, {2, 3}));
        result.bell_fidelity = 0.5 * (f1 + f2);
        measured_pair = keep_qubits(purified, {0, 1});
    } else {
        result.bell_fidelity = fidelity_with_pure(ideal, recv);
        measured_pair = recv;
    }

    result.capacity = channel_capacity(measured_pair);
    result.decoded_distribution = bell_measure(measured_pair);

    std::mt19937_64 rng(config.seed);
    for (const Message m : all_messages()) result.sampled_counts[m] = 0;
    for (int s = 0; s < config.shots; ++s) {
        const double u = uniform01(rng);
        double acc = 0.0;
        Message picked = all_messages().back();
        for (const Message m : all_messages()) {
            acc += result.decoded_distribution.at(m);
            if (u < acc) {
                picked = m;
                break;
            }
        }
        ++result.sampled_counts[picked];
    }
    return result;
}

}  // namespace densecode
