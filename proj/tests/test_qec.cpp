#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "densecode/densecode.hpp"
#include "test_util.hpp"

using namespace densecode;

namespace {

const std::array<Pauli, 3> kErrors{Pauli::X, Pauli::Y, Pauli::Z};

cmatrix apply_word(const cmatrix& rho, const PauliString& word) {
    const cmatrix m = word.matrix();
    return m * rho * m.adjoint();
}

}  // namespace

TEST_CASE("Pauli strings expose their algebra", "[qec]") {
    const PauliString w = pauli_string("XZZXI");
    REQUIRE(w.str() == "XZZXI");
    REQUIRE_FALSE(w.is_identity());
    REQUIRE(pauli_string("IIIII").is_identity());
    REQUIRE(single_pauli(Pauli::X, 2).str() == "IIXII");
    REQUIRE_THROWS_AS(pauli_string("XZ"), std::invalid_argument);
    REQUIRE_THROWS_AS(pauli_string("XZZXQ"), std::invalid_argument);

    // Dense matrix agrees with the kron chain.
    cmatrix dense = pauli_x_matrix();
    dense = kron(dense, pauli_z_matrix());
    dense = kron(dense, pauli_z_matrix());
    dense = kron(dense, pauli_x_matrix());
    dense = kron(dense, cmatrix::Identity(2, 2));
    REQUIRE((w.matrix() - dense).cwiseAbs().maxCoeff() < 1e-14);

    REQUIRE(pauli_string("XIIII").commutes_with(pauli_string("IXIII")));
    REQUIRE_FALSE(pauli_string("XIIII").commutes_with(pauli_string("ZIIII")));
    REQUIRE(pauli_string("XXIII").commutes_with(pauli_string("ZZIII")));
}

TEST_CASE("code structure: generators, logicals, encoder, projector", "[qec]") {
    const StabilizerCode& code = five_qubit_code();

    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            REQUIRE(code.generators[i].commutes_with(code.generators[j]));
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(code.logical_x.commutes_with(code.generators[i]));
        REQUIRE(code.logical_z.commutes_with(code.generators[i]));
    }
    REQUIRE_FALSE(code.logical_x.commutes_with(code.logical_z));

    const cmatrix utu = code.encoder.adjoint() * code.encoder;
    REQUIRE((utu - cmatrix::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-10);

    const cmatrix proj = codespace_projector(code);
    REQUIRE(std::abs(proj.trace().real() - 2.0) < 1e-10);
    REQUIRE((proj * proj - proj).cwiseAbs().maxCoeff() < 1e-10);
    for (std::size_t i = 0; i < 4; ++i)
        REQUIRE((code.generators[i].matrix() * proj - proj).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("syndromes of single-qubit errors are nonzero and distinct", "[qec]") {
    const StabilizerCode& code = five_qubit_code();
    REQUIRE(error_syndrome(code, pauli_string("IIIII")).value() == 0);
    REQUIRE(error_syndrome(code, single_pauli(Pauli::X, 0)).value() == 1);
    REQUIRE(error_syndrome(code, single_pauli(Pauli::Z, 0)).value() == 10);

    std::set<int> seen;
    for (Pauli p : kErrors)
        for (int qubit = 0; qubit < 5; ++qubit) {
            const int v = error_syndrome(code, single_pauli(p, qubit)).value();
            REQUIRE(v != 0);
            seen.insert(v);
        }
    REQUIRE(seen.size() == 15);

    // The recovery table reproduces each syndrome and starts with identity.
    REQUIRE(code.syndrome_table[0].is_identity());
    for (int v = 0; v < 16; ++v)
        REQUIRE(error_syndrome(code, code.syndrome_table[static_cast<std::size_t>(v)]).value() ==
                v);
}

TEST_CASE("syndrome values round-trip", "[qec]") {
    for (int v = 0; v < 16; ++v) {
        const Syndrome s = Syndrome::from_value(v);
        REQUIRE(s.value() == v);
        REQUIRE(s == Syndrome::from_value(v));
    }
    REQUIRE_FALSE(Syndrome::from_value(3) == Syndrome::from_value(12));
}

TEST_CASE("encode and decode are mutually inverse", "[qec]") {
    const StabilizerCode& code = five_qubit_code();

    const cmatrix psi = testutil::random_density(2, 31);
    const cmatrix enc = encode(code, psi);
    REQUIRE(qubit_count(enc) == 5);
    REQUIRE(deterministic_syndrome(code, enc).value() == 0);
    REQUIRE((decode(code, enc) - psi).cwiseAbs().maxCoeff() < 1e-9);

    // Logical Z expectation survives encoding of |0>.
    const cmatrix zero_enc = encode(code, zero_state(1));
    REQUIRE(std::abs(expectation_value(zero_enc, code.logical_z.matrix(), {0, 1, 2, 3, 4}) - 1.0) <
            1e-9);

    // Half of a Bell pair, wrapped at either slot, keeps the entanglement.
    const cmatrix bell = bell_state(BellKind::phi_plus);
    const cmatrix enc0 = encode(code, bell, 0);
    REQUIRE(qubit_count(enc0) == 6);
    REQUIRE(deterministic_syndrome(code, enc0, 0).value() == 0);
    REQUIRE(fidelity_with_pure(bell, decode(code, enc0, 0)) > 1.0 - 1e-9);

    const cmatrix enc1 = encode(code, bell, 1);
    REQUIRE(deterministic_syndrome(code, enc1, 1).value() == 0);
    REQUIRE(fidelity_with_pure(bell, decode(code, enc1, 1)) > 1.0 - 1e-9);
}

TEST_CASE("every single-qubit Pauli error is corrected exactly", "[qec]") {
    const StabilizerCode& code = five_qubit_code();
    const cmatrix psi = testutil::random_density(2, 32);
    const cmatrix enc = encode(code, psi);

    for (Pauli p : kErrors)
        for (int qubit = 0; qubit < 5; ++qubit) {
            const PauliString err = single_pauli(p, qubit);
            const cmatrix corrupted = apply_word(enc, err);
            const Syndrome s = deterministic_syndrome(code, corrupted);
            REQUIRE(s == error_syndrome(code, err));
            const cmatrix repaired = decode(code, correct(code, corrupted, s, 0));
            CAPTURE(err.str());
            REQUIRE((repaired - psi).cwiseAbs().maxCoeff() < 1e-9);
        }
}

TEST_CASE("deterministic syndrome readout rejects mixed sectors", "[qec]") {
    const StabilizerCode& code = five_qubit_code();
    const cmatrix enc = encode(code, testutil::random_density(2, 33));
    const cmatrix noisy = apply_channel(amplitude_damping(0.3), enc, {1});
    REQUIRE_THROWS_AS(deterministic_syndrome(code, noisy), std::invalid_argument);
}

TEST_CASE("syndrome branches decompose noisy states", "[qec]") {
    const StabilizerCode& code = five_qubit_code();
    const cmatrix enc = encode(code, testutil::random_density(2, 34));

    // A definite error occupies exactly one sector.
    const PauliString err = single_pauli(Pauli::X, 2);
    const auto pure_branches = syndrome_branches(code, apply_word(enc, err));
    for (const SyndromeBranch& b : pure_branches) {
        if (b.syndrome == error_syndrome(code, err)) {
            REQUIRE(b.probability > 1.0 - 1e-9);
        } else {
            REQUIRE(b.probability < 1e-9);
        }
    }

    const cmatrix noisy = apply_channel(amplitude_damping(0.3), enc, {1});
    const auto branches = syndrome_branches(code, noisy);
    REQUIRE(branches.size() == 16);
    double total = 0.0;
    for (const SyndromeBranch& b : branches) {
        REQUIRE(b.probability >= 0.0);
        total += b.probability;
        if (b.probability > prob_floor) {
            REQUIRE(std::abs(b.state.trace().real() - 1.0) < 1e-9);
            REQUIRE(testutil::min_eigenvalue(b.state) > -1e-9);
        }
    }
    REQUIRE(std::abs(total - 1.0) < 1e-9);

    REQUIRE_THROWS_AS(syndrome_branches(code, enc, 1), std::invalid_argument);
}

TEST_CASE("sampled syndrome extraction agrees with the exact decomposition", "[qec]") {
    const StabilizerCode& code = five_qubit_code();
    const cmatrix enc = encode(code, testutil::random_density(2, 35));

    // Definite sector: any seed reads the same syndrome and leaves the state.
    const PauliString err = single_pauli(Pauli::X, 2);
    const cmatrix corrupted = apply_word(enc, err);
    const SyndromeMeasurement m =
        measure_syndrome(code, append_fresh_qubits(corrupted, 4), 0, std::uint64_t{99});
    REQUIRE(m.syndrome == error_syndrome(code, err));
    REQUIRE(qubit_count(m.state) == 5);
    REQUIRE((m.state - corrupted).cwiseAbs().maxCoeff() < 1e-8);

    // Mixed sectors: the sampled branch matches the projected one.
    const cmatrix noisy = apply_channel(amplitude_damping(0.3), enc, {1});
    const auto branches = syndrome_branches(code, noisy);
    const cmatrix with_ancillas = append_fresh_qubits(noisy, 4);
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        const SyndromeMeasurement sample = measure_syndrome(code, with_ancillas, 0, seed);
        const SyndromeBranch& b = branches[static_cast<std::size_t>(sample.syndrome.value())];
        CAPTURE(seed, sample.syndrome.value());
        REQUIRE(b.probability > prob_floor);
        REQUIRE((sample.state - b.state).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("sampled syndrome extraction validates its register", "[qec]") {
    const StabilizerCode& code = five_qubit_code();
    REQUIRE_THROWS_AS(measure_syndrome(code, zero_state(8), 0, std::uint64_t{1}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(measure_syndrome(code, zero_state(9), 1, std::uint64_t{1}),
                      std::invalid_argument);

    cmatrix dirty = zero_state(9);
    dirty = conjugate_on(dirty, pauli_x_matrix(), {8});
    REQUIRE_THROWS_AS(measure_syndrome(code, dirty, 0, std::uint64_t{1}), std::invalid_argument);
}

TEST_CASE("controlled Pauli words match their dense embedding", "[qec]") {
    const cmatrix rho = testutil::random_density(64, 36);
    for (const char* word : {"XZZXI", "ZXIXZ", "XIXZZ", "XYZIX"}) {
        const PauliString w = pauli_string(word);
        const cmatrix ctrl = embed_operator(projector0(), {5}, 6) +
                             embed_operator(projector1(), {5}, 6) *
                                 embed_operator(w.matrix(), {0, 1, 2, 3, 4}, 6);
        const cmatrix expected = ctrl * rho * ctrl.adjoint();

        cmatrix inplace = rho;
        detail::apply_controlled_pauli_inplace(inplace, 5, 0, w);
        CAPTURE(word);
        REQUIRE((inplace - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}
