#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "densecode/densecode.hpp"
#include "test_util.hpp"

using namespace densecode;

namespace {

// Classical correlations of a Werner state in closed form.
double werner_classical(double w) {
    double t = 0.0;
    for (double s : {1.0 - w, 1.0 + w})
        if (s > 0.0) t += s * std::log2(s);
    return t / 2.0;
}

double werner_mutual(double w) {
    double s = 0.0;
    const double ev[] = {(1.0 + 3.0 * w) / 4.0, (1.0 - w) / 4.0, (1.0 - w) / 4.0,
                         (1.0 - w) / 4.0};
    for (double e : ev)
        if (e > 1e-15) s -= e * std::log2(e);
    return 2.0 - s;
}

cmatrix classical_pair() {
    cmatrix rho = cmatrix::Zero(4, 4);
    rho(0, 0) = 0.5;
    rho(3, 3) = 0.5;
    return rho;
}

}  // namespace

TEST_CASE("concurrence of reference states", "[metrics]") {
    REQUIRE(std::abs(concurrence(bell_state(BellKind::phi_plus)) - 1.0) < 1e-9);
    REQUIRE(std::abs(concurrence(bell_state(BellKind::psi_minus)) - 1.0) < 1e-9);
    REQUIRE(concurrence(zero_state(2)) < 1e-9);
    REQUIRE(concurrence(classical_pair()) < 1e-7);

    for (double w : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.75, 1.0}) {
        const double expected = std::max(0.0, (3.0 * w - 1.0) / 2.0);
        REQUIRE(std::abs(concurrence(testutil::werner_state(w)) - expected) < 1e-7);
    }

    // One-sided damping of phi+ keeps an X-shaped state with concurrence
    // sqrt(1-p)(1-q).
    for (double p : {0.0, 0.2, 0.6})
        for (double q : {0.0, 0.3, 0.8}) {
            const cmatrix rho =
                composite_channel_apply({p, q}, bell_state(BellKind::phi_plus), 0);
            const double expected = std::sqrt(1.0 - p) * (1.0 - q);
            REQUIRE(std::abs(concurrence(rho) - expected) < 1e-7);
        }
}

TEST_CASE("entanglement of formation follows the concurrence formula", "[metrics]") {
    REQUIRE(eof_from_concurrence(0.0) == 0.0);
    REQUIRE(std::abs(eof_from_concurrence(1.0) - 1.0) < 1e-12);
    REQUIRE(std::abs(eof_from_concurrence(0.6) - 0.4689955935892812) < 1e-12);

    double prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double cur = eof_from_concurrence(k / 20.0);
        REQUIRE(cur > prev);
        prev = cur;
    }

    REQUIRE(std::abs(entanglement_of_formation(bell_state(BellKind::phi_minus)) - 1.0) < 1e-9);
    REQUIRE(entanglement_of_formation(classical_pair()) < 1e-7);

    // For a pure state the entanglement equals the marginal entropy.
    for (unsigned seed : {7u, 8u, 9u}) {
        const cmatrix psi = testutil::random_pure(4, seed);
        const double marginal = von_neumann_entropy(partial_trace(psi, {2, 2}, {0}));
        REQUIRE(std::abs(entanglement_of_formation(psi) - marginal) < 1e-6);
    }
}

TEST_CASE("mutual information of reference states", "[metrics]") {
    const cmatrix product = kron(testutil::random_density(2, 10), testutil::random_density(2, 11));
    REQUIRE(mutual_information(product) < 1e-9);
    REQUIRE(std::abs(mutual_information(bell_state(BellKind::phi_plus)) - 2.0) < 1e-9);
    REQUIRE(std::abs(mutual_information(classical_pair()) - 1.0) < 1e-9);
}

TEST_CASE("classical correlations of reference states", "[metrics]") {
    const cmatrix product = kron(testutil::random_density(2, 12), testutil::random_density(2, 13));
    REQUIRE(classical_correlations(product).value < 1e-9);
    REQUIRE(std::abs(classical_correlations(bell_state(BellKind::phi_plus)).value - 1.0) < 1e-9);

    const ClassicalCorrelations cc = classical_correlations(classical_pair());
    REQUIRE(std::abs(cc.value - 1.0) < 1e-9);

    for (unsigned seed : {14u, 15u, 16u}) {
        const MeasurementAngles a = classical_correlations(testutil::random_density(4, seed)).angles;
        REQUIRE(a.theta >= 0.0);
        REQUIRE(a.theta <= std::numbers::pi);
        REQUIRE(a.phi >= 0.0);
        REQUIRE(a.phi < 2.0 * std::numbers::pi);
    }
}

TEST_CASE("Werner family matches its closed forms", "[metrics]") {
    for (double w : {0.3, 0.5, 0.8}) {
        const cmatrix rho = testutil::werner_state(w);
        REQUIRE(std::abs(classical_correlations(rho).value - werner_classical(w)) < 5e-7);
        REQUIRE(std::abs(mutual_information(rho) - werner_mutual(w)) < 1e-9);
        REQUIRE(std::abs(quantum_discord(rho) - (werner_mutual(w) - werner_classical(w))) < 5e-7);
    }
}

TEST_CASE("correlation report matches reference values for damped Bell pairs", "[metrics]") {
    struct Row {
        double p, q, qd, fidelity, eof;
    };
    // Reference values computed with an independent implementation.
    const Row rows[] = {
        {0.10, 0.1, 0.676613933090, 0.901907484123, 0.794560514949},
        {0.30, 0.2, 0.441641527297, 0.759664010614, 0.553355564251},
        {0.50, 0.5, 0.130716212104, 0.551776695297, 0.205763054276},
        {0.80, 0.4, 0.111262413504, 0.434164078650, 0.131994115900},
        {1.00, 0.0, 0.000000000000, 0.250000000000, 0.000000000000},
        {0.05, 0.9, 0.007041818082, 0.536233971724, 0.024176618398},
    };
    for (const Row& r : rows) {
        const cmatrix rho = composite_channel_apply({r.p, r.q}, bell_state(BellKind::phi_plus), 0);
        const CorrelationReport rep = correlation_report(rho);
        CAPTURE(r.p, r.q);
        REQUIRE(std::abs(rep.qd - r.qd) < 5e-7);
        REQUIRE(std::abs(rep.fidelity - r.fidelity) < 5e-7);
        REQUIRE(std::abs(rep.eof - r.eof) < 5e-7);
    }
}

TEST_CASE("correlation report is internally consistent", "[metrics]") {
    const cmatrix rho = composite_channel_apply({0.25, 0.15}, bell_state(BellKind::phi_plus), 0);
    const CorrelationReport rep = correlation_report(rho);

    REQUIRE(std::abs(rep.qd - (rep.mutual_info - rep.classical_info)) < 1e-9);
    REQUIRE(std::abs(rep.fidelity - fidelity_with_pure(bell_state(BellKind::phi_plus), rho)) <
            1e-15);
    REQUIRE(std::abs(rep.concurrence - concurrence(rho)) < 1e-15);
    REQUIRE(std::abs(rep.eof - eof_from_concurrence(rep.concurrence)) < 1e-15);
    REQUIRE(std::abs(rep.mutual_info - mutual_information(rho)) < 1e-15);
    REQUIRE(std::abs(rep.qd - quantum_discord(rho)) < 1e-12);

    // Two invocations agree bit for bit.
    const CorrelationReport again = correlation_report(rho);
    REQUIRE(rep.qd == again.qd);
    REQUIRE(rep.classical_info == again.classical_info);
    REQUIRE(rep.eof == again.eof);
}

TEST_CASE("correlation measures are invariant under local unitaries", "[metrics]") {
    const cmatrix states[] = {
        testutil::werner_state(0.7),
        composite_channel_apply({0.2, 0.1}, bell_state(BellKind::phi_plus), 0),
    };
    for (const cmatrix& rho : states) {
        const double qd0 = quantum_discord(rho);
        const double c0 = concurrence(rho);
        const double mi0 = mutual_information(rho);
        for (unsigned seed : {21u, 22u}) {
            const cmatrix u = kron(testutil::random_unitary(2, seed),
                                   testutil::random_unitary(2, seed + 100));
            const cmatrix rot = u * rho * u.adjoint();
            REQUIRE(std::abs(quantum_discord(rot) - qd0) < 1e-6);
            REQUIRE(std::abs(concurrence(rot) - c0) < 1e-7);
            REQUIRE(std::abs(mutual_information(rot) - mi0) < 1e-9);
        }
    }
}

TEST_CASE("all correlation measures decay with stronger damping", "[metrics]") {
    constexpr int n = 11;
    std::vector<CorrelationReport> grid(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const NoiseParams np{i / double(n - 1), j / double(n - 1)};
            grid[i * n + j] =
                correlation_report(composite_channel_apply(np, bell_state(BellKind::phi_plus), 0));
        }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const CorrelationReport& cur = grid[i * n + j];
            if (i > 0) {
                const CorrelationReport& up = grid[(i - 1) * n + j];
                REQUIRE(cur.fidelity <= up.fidelity + 1e-7);
                REQUIRE(cur.eof <= up.eof + 1e-7);
                REQUIRE(cur.qd <= up.qd + 1e-7);
            }
            if (j > 0) {
                const CorrelationReport& left = grid[i * n + j - 1];
                REQUIRE(cur.fidelity <= left.fidelity + 1e-7);
                REQUIRE(cur.eof <= left.eof + 1e-7);
                REQUIRE(cur.qd <= left.qd + 1e-7);
            }
        }
}

TEST_CASE("two-qubit metrics reject other dimensions", "[metrics]") {
    REQUIRE_THROWS_AS(quantum_discord(zero_state(3)), std::invalid_argument);
    REQUIRE_THROWS_AS(concurrence(zero_state(1)), std::invalid_argument);
    REQUIRE_THROWS_AS(classical_correlations(zero_state(3)), std::invalid_argument);
    REQUIRE_THROWS_AS(mutual_information(zero_state(1)), std::invalid_argument);
}
