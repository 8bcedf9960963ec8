#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "densecode/experiments.hpp"
#include "densecode/protocol.hpp"
#include "densecode/purification.hpp"
#include "densecode/qec.hpp"

namespace densecode {

namespace detail {

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open " + path);
    file << j.dump(2) << '\n';
    file.flush();
    if (!file) throw std::invalid_argument("write failed for " + path);
}

inline void print_kv(std::ostream& os, const char* key, double value) {
    os << key << '=' << format_g17(value) << '\n';
}

struct QecTestReport {
    int corrected = 0;
    bool syndromes_distinct = true;
    std::vector<std::string> lines;  // one per error word
    nlohmann::json json;
};

// Exhaustive single-error pipeline on the encoded half of phi+: inject each
// of the 15 weight-one Pauli words, run the sampled ancilla measurement,
// correct, decode, and compare against the untouched pair.
inline QecTestReport run_qec_test(std::uint64_t seed) {
    const StabilizerCode& code = five_qubit_code();
    const cmatrix bell = bell_state(BellKind::phi_plus);
    const cmatrix encoded = encode(code, bell, 0);  // (c0..c4, Bob)
    std::mt19937_64 rng(seed);

    QecTestReport report;
    report.json["errors"] = nlohmann::json::array();
    std::array<bool, 16> seen{};
    for (int qubit = 0; qubit < 5; ++qubit)
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
            const PauliString error = single_pauli(p, qubit);
            cmatrix damaged =
                conjugate_on(encoded, single_pauli_matrix(p), {qubit});
            damaged = append_fresh_qubits(damaged, 4);
            const SyndromeMeasurement meas = measure_syndrome(code, damaged, 0, rng);
            const int value = meas.syndrome.value();
            if (value == 0 || seen[static_cast<std::size_t>(value)])
                report.syndromes_distinct = false;
            seen[static_cast<std::size_t>(value)] = true;
            const cmatrix fixed = correct(code, meas.state, meas.syndrome, 0);
            const double f = fidelity_with_pure(bell, decode(code, fixed, 0));
            const bool ok = f >= 1.0 - 1e-9;
            if (ok) ++report.corrected;
            report.lines.push_back("error=" + error.str() + " syndrome=" + std::to_string(value) +
                                   " fidelity=" + format_g17(f));
            report.json["errors"].push_back(
                {{"error", error.str()}, {"syndrome", value}, {"fidelity", f}, {"corrected", ok}});
        }
    report.json["corrected"] = report.corrected;
    report.json["total"] = 15;
    report.json["syndromes_distinct"] = report.syndromes_distinct;
    return report;
}

}  // namespace detail

// Command-line front end.  Exit codes: 0 success, 1 user error (bad
// arguments or unusable input data), 2 violated internal invariant.
inline int run_cli(int argc, const char* const* argv) {
    CLI::App app{"density-matrix simulator for noisy dense coding"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    app.add_option("--seed", seed, "seed for every sampled quantity")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "evaluate the noise grid and write a CSV");
    int p_steps = 21, q_steps = 21;
    std::string sweep_out;
    sweep->add_option("--p-steps", p_steps, "grid points along p")
        ->check(CLI::Range(2, 2001))
        ->capture_default_str();
    sweep->add_option("--q-steps", q_steps, "grid points along q")
        ->check(CLI::Range(2, 2001))
        ->capture_default_str();
    sweep->add_option("--out", sweep_out, "output CSV path")->required();

    auto* regress = app.add_subcommand("regress", "fit fidelity against QD and EoF from a CSV");
    std::string regress_in, regress_json;
    regress->add_option("--in", regress_in, "input CSV path")->required();
    regress->add_option("--json-out", regress_json, "also write the fit as JSON");

    auto* qec = app.add_subcommand("qec-test", "exhaustive single-error correction check");
    std::string qec_json;
    qec->add_option("--json-out", qec_json, "also write the per-error results as JSON");

    auto* purify = app.add_subcommand("purify-opt", "estimate noise from metrics, optimize angles");
    double purify_p = 0.1, purify_q = 0.1;
    std::string purify_json;
    purify->add_option("--p", purify_p, "true amplitude-damping strength")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    purify->add_option("--q", purify_q, "true phase-damping strength")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    purify->add_option("--json-out", purify_json, "also write the optimizer result as JSON");

    auto* proto = app.add_subcommand("protocol", "run the end-to-end dense-coding pipeline");
    double proto_p = 0.0, proto_q = 0.0;
    bool proto_qec = false, proto_purify = false;
    int pilots = 1, shots = 1, msg_i = 0, msg_j = 0;
    std::string proto_json;
    proto->add_option("--p", proto_p, "amplitude-damping strength")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    proto->add_option("--q", proto_q, "phase-damping strength")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    proto->add_flag("--qec", proto_qec, "protect the transmitted qubit with the five-qubit code");
    proto->add_flag("--purify", proto_purify, "adaptive purification from pilot metrics");
    proto->add_option("--pilots", pilots, "pilot pairs per estimate")->check(CLI::Range(1, 1 << 20));
    proto->add_option("--shots", shots, "sampled readouts")->check(CLI::Range(1, 1 << 30));
    proto->add_option("--msg-i", msg_i, "message bit i")->check(CLI::Range(0, 1));
    proto->add_option("--msg-j", msg_j, "message bit j")->check(CLI::Range(0, 1));
    proto->add_option("--json-out", proto_json, "also write the full result as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sweep->parsed()) {
            const std::vector<ExperimentRecord> records = sweep_noise_grid(p_steps, q_steps);
            write_csv(sweep_out, records);
            std::cout << "rows=" << records.size() << '\n' << "out=" << sweep_out << '\n';
        } else if (regress->parsed()) {
            const RegressionFit fit = fit_regression(read_csv(regress_in));
            detail::print_kv(std::cout, "alpha", fit.alpha);
            detail::print_kv(std::cout, "beta_qd", fit.beta_qd);
            detail::print_kv(std::cout, "beta_eof", fit.beta_eof);
            detail::print_kv(std::cout, "r2", fit.r2);
            detail::print_kv(std::cout, "mse", fit.mse);
            if (!regress_json.empty())
                detail::write_json_file(regress_json, {{"alpha", fit.alpha},
                                                       {"beta_qd", fit.beta_qd},
                                                       {"beta_eof", fit.beta_eof},
                                                       {"r2", fit.r2},
                                                       {"mse", fit.mse}});
        } else if (qec->parsed()) {
            const detail::QecTestReport report = detail::run_qec_test(seed);
            for (const std::string& line : report.lines) std::cout << line << '\n';
            std::cout << report.corrected << "/15 single-qubit Pauli errors corrected\n";
            std::cout << "syndromes_distinct=" << (report.syndromes_distinct ? 1 : 0) << '\n';
            if (!qec_json.empty()) detail::write_json_file(qec_json, report.json);
            if (report.corrected != 15 || !report.syndromes_distinct)
                throw internal_error("single-error correction failed");
        } else if (purify->parsed()) {
            const cmatrix probe =
                composite_channel_apply({purify_p, purify_q}, bell_state(BellKind::phi_plus), 0);
            const CorrelationReport rep = correlation_report(probe);
            const NoiseEstimate est = estimate_noise(rep.qd, rep.eof, default_metric_table());
            const AngleOptimum opt = optimize_angles(est);
            const cmatrix two = kron(probe, probe);
            const double before = mean_pair_fidelity(two);
            detail::print_kv(std::cout, "qd", rep.qd);
            detail::print_kv(std::cout, "eof", rep.eof);
            detail::print_kv(std::cout, "p_hat", est.p_hat);
            detail::print_kv(std::cout, "q_hat", est.q_hat);
            detail::print_kv(std::cout, "residual", est.residual);
            detail::print_kv(std::cout, "theta1", opt.angles.theta1);
            detail::print_kv(std::cout, "theta2", opt.angles.theta2);
            detail::print_kv(std::cout, "fidelity_before", before);
            detail::print_kv(std::cout, "fidelity_after", opt.fidelity);
            if (!purify_json.empty())
                detail::write_json_file(purify_json, {{"qd", rep.qd},
                                                      {"eof", rep.eof},
                                                      {"p_hat", est.p_hat},
                                                      {"q_hat", est.q_hat},
                                                      {"residual", est.residual},
                                                      {"theta1", opt.angles.theta1},
                                                      {"theta2", opt.angles.theta2},
                                                      {"fidelity_before", before},
                                                      {"fidelity_after", opt.fidelity}});
        } else if (proto->parsed()) {
            ProtocolConfig config;
            config.noise = {proto_p, proto_q};
            config.use_qec = proto_qec;
            config.use_adaptive_purification = proto_purify;
            config.pilot_count = pilots;
            config.shots = shots;
            config.seed = seed;
            const ProtocolResult result = run_protocol(config, {msg_i, msg_j});
            nlohmann::json j;
            for (const Message m : all_messages()) {
                const std::string suffix = std::to_string(m.i) + std::to_string(m.j);
                detail::print_kv(std::cout, ("p_" + suffix).c_str(),
                                 result.decoded_distribution.at(m));
                j["decoded_distribution"][suffix] = result.decoded_distribution.at(m);
            }
            for (const Message m : all_messages()) {
                const std::string suffix = std::to_string(m.i) + std::to_string(m.j);
                std::cout << "count_" << suffix << '=' << result.sampled_counts.at(m) << '\n';
                j["sampled_counts"][suffix] = result.sampled_counts.at(m);
            }
            detail::print_kv(std::cout, "bell_fidelity", result.bell_fidelity);
            detail::print_kv(std::cout, "capacity", result.capacity);
            detail::print_kv(std::cout, "pilot_qd", result.pilot_metrics.qd);
            detail::print_kv(std::cout, "pilot_eof", result.pilot_metrics.eof);
            detail::print_kv(std::cout, "pilot_fidelity", result.pilot_metrics.fidelity);
            j["bell_fidelity"] = result.bell_fidelity;
            j["capacity"] = result.capacity;
            j["pilot"] = {{"qd", result.pilot_metrics.qd},
                          {"eof", result.pilot_metrics.eof},
                          {"fidelity", result.pilot_metrics.fidelity},
                          {"mutual_info", result.pilot_metrics.mutual_info},
                          {"classical_info", result.pilot_metrics.classical_info},
                          {"concurrence", result.pilot_metrics.concurrence}};
            if (result.chosen_angles) {
                detail::print_kv(std::cout, "theta1", result.chosen_angles->theta1);
                detail::print_kv(std::cout, "theta2", result.chosen_angles->theta2);
                j["chosen_angles"] = {{"theta1", result.chosen_angles->theta1},
                                      {"theta2", result.chosen_angles->theta2}};
            }
            if (!proto_json.empty()) detail::write_json_file(proto_json, j);
        }
        return 0;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}

// Convenience overload for in-process drivers and tests.
inline int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace densecode
