#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "densecode/gates.hpp"
#include "densecode/tensor.hpp"

namespace densecode {

enum class Pauli : unsigned char { I, X, Y, Z };

inline cmatrix single_pauli_matrix(Pauli p) {
    switch (p) {
        case Pauli::I: return cmatrix::Identity(2, 2);
        case Pauli::X: return pauli_x_matrix();
        case Pauli::Y: return pauli_y_matrix();
        case Pauli::Z: return pauli_z_matrix();
    }
    throw std::invalid_argument("single_pauli_matrix: bad operator tag");
}

// Length-5 Pauli word with an overall phase, e.g. the code generators below.
struct PauliString {
    std::array<Pauli, 5> ops{Pauli::I, Pauli::I, Pauli::I, Pauli::I, Pauli::I};
    complex phase{1.0, 0.0};

    bool is_identity() const {
        for (Pauli p : ops)
            if (p != Pauli::I) return false;
        return true;
    }

    // Two Pauli words commute iff they clash (both non-identity, different
    // letter) at an even number of positions.
    bool commutes_with(const PauliString& other) const {
        int clashes = 0;
        for (int k = 0; k < 5; ++k) {
            const Pauli a = ops[k], b = other.ops[k];
            if (a != Pauli::I && b != Pauli::I && a != b) ++clashes;
        }
        return clashes % 2 == 0;
    }

    cmatrix matrix() const {
        cmatrix m = single_pauli_matrix(ops[0]);
        for (int k = 1; k < 5; ++k) m = kron(m, single_pauli_matrix(ops[k]));
        return phase * m;
    }

    std::string str() const {
        std::string s;
        for (Pauli p : ops) s += "IXYZ"[static_cast<int>(p)];
        return s;
    }
};

inline PauliString pauli_string(std::string_view word) {
    if (word.size() != 5) throw std::invalid_argument("pauli_string: need exactly 5 letters");
    PauliString out;
    for (int k = 0; k < 5; ++k) {
        switch (word[k]) {
            case 'I': out.ops[k] = Pauli::I; break;
            case 'X': out.ops[k] = Pauli::X; break;
            case 'Y': out.ops[k] = Pauli::Y; break;
            case 'Z': out.ops[k] = Pauli::Z; break;
            default: throw std::invalid_argument("pauli_string: letters must be I, X, Y, Z");
        }
    }
    return out;
}

inline PauliString single_pauli(Pauli p, int qubit) {
    if (qubit < 0 || qubit >= 5) throw std::invalid_argument("single_pauli: qubit out of range");
    PauliString out;
    out.ops[static_cast<std::size_t>(qubit)] = p;
    return out;
}

struct Syndrome {
    std::array<bool, 4> bits{};

    int value() const {
        return (bits[0] << 3) | (bits[1] << 2) | (bits[2] << 1) | static_cast<int>(bits[3]);
    }

    static Syndrome from_value(int v) {
        if (v < 0 || v > 15) throw std::invalid_argument("Syndrome::from_value: need 0..15");
        Syndrome s;
        for (int i = 0; i < 4; ++i) s.bits[static_cast<std::size_t>(i)] = (v >> (3 - i)) & 1;
        return s;
    }

    bool operator==(const Syndrome&) const = default;
};

struct StabilizerCode {
    std::array<PauliString, 4> generators;
    PauliString logical_x, logical_z;
    std::array<PauliString, 16> syndrome_table;  // indexed by Syndrome::value()
    cmatrix encoder;                             // 32x32 unitary, |b,0000> -> logical b
};

// Bit i is set iff the error word anticommutes with generator i.
inline Syndrome error_syndrome(const StabilizerCode& code, const PauliString& error) {
    Syndrome s;
    for (int i = 0; i < 4; ++i)
        s.bits[static_cast<std::size_t>(i)] = !error.commutes_with(code.generators[i]);
    return s;
}

namespace detail {

inline cmatrix projector_from_generators(const std::array<PauliString, 4>& generators) {
    cmatrix p = cmatrix::Identity(32, 32);
    for (const PauliString& g : generators) p = 0.5 * (p + p * g.matrix());
    return p;
}

// Deterministic synthesis: the two logical columns come from the codespace
// projector, the remaining 30 from Gram-Schmidt over the standard basis in
// ascending index order.
inline cmatrix build_encoder(const std::array<PauliString, 4>& generators,
                             const PauliString& logical_x) {
    const cmatrix proj = projector_from_generators(generators);
    cvector zero_l = proj.col(0);
    const double norm = zero_l.norm();
    if (norm < 1e-8) throw internal_error("build_encoder: degenerate codespace projection");
    zero_l /= norm;
    const cvector one_l = logical_x.matrix() * zero_l;

    cmatrix u = cmatrix::Zero(32, 32);
    u.col(0) = zero_l;
    u.col(16) = one_l;
    std::vector<cvector> basis{zero_l, one_l};
    int next = 1;
    for (int cand = 0; cand < 32 && basis.size() < 32; ++cand) {
        cvector v = cvector::Zero(32);
        v(cand) = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (const cvector& b : basis) v -= b * b.dot(v);
        const double r = v.norm();
        if (r < 1e-6) continue;
        v /= r;
        u.col(next) = v;
        basis.push_back(v);
        if (++next == 16) ++next;
    }
    if (basis.size() != 32) throw internal_error("build_encoder: basis completion failed");
    const double defect =
        (u.adjoint() * u - cmatrix::Identity(32, 32)).cwiseAbs().maxCoeff();
    if (defect > 1e-10) throw internal_error("build_encoder: result is not unitary");
    return u;
}

}  // namespace detail

inline cmatrix codespace_projector(const StabilizerCode& code) {
    return detail::projector_from_generators(code.generators);
}

inline StabilizerCode build_code() {
    StabilizerCode code;
    code.generators = {pauli_string("XZZXI"), pauli_string("IXZZX"), pauli_string("XIXZZ"),
                       pauli_string("ZXIXZ")};
    code.logical_x = pauli_string("XXXXX");
    code.logical_z = pauli_string("ZZZZZ");
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            if (!code.generators[a].commutes_with(code.generators[b]))
                throw internal_error("build_code: generators do not commute");

    code.syndrome_table[0] = PauliString{};
    std::array<bool, 16> used{};
    used[0] = true;
    for (int qubit = 0; qubit < 5; ++qubit)
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
            const PauliString e = single_pauli(p, qubit);
            const int v = error_syndrome(code, e).value();
            if (v == 0 || used[static_cast<std::size_t>(v)])
                throw internal_error("build_code: syndrome map is not injective");
            used[static_cast<std::size_t>(v)] = true;
            code.syndrome_table[static_cast<std::size_t>(v)] = e;
        }
    code.encoder = detail::build_encoder(code.generators, code.logical_x);
    return code;
}

inline const StabilizerCode& five_qubit_code() {
    static const StabilizerCode code = build_code();
    return code;
}

// Wraps the qubit at `slot` into the code: four fresh |0> ancillas are
// inserted right after it and the encoder acts on the five-qubit window, so
// the block occupies slots slot..slot+4 afterwards.  Any entanglement with
// the untouched qubits is carried along.
inline cmatrix encode(const StabilizerCode& code, const cmatrix& rho, int slot = 0) {
    const int n = qubit_count(rho);
    if (slot < 0 || slot >= n) throw std::invalid_argument("encode: slot out of range");
    const cmatrix big = insert_fresh_qubits(rho, slot, 4);
    return conjugate_on(big, code.encoder, {slot, slot + 1, slot + 2, slot + 3, slot + 4});
}

// Inverse of encode: un-rotates the window and traces out the four ancilla
// slots, leaving the logical qubit at `slot`.
inline cmatrix decode(const StabilizerCode& code, const cmatrix& rho, int slot = 0) {
    const int n = qubit_count(rho);
    if (slot < 0 || slot + 5 > n) throw std::invalid_argument("decode: code block out of range");
    const cmatrix un =
        conjugate_on(rho, code.encoder.adjoint(), {slot, slot + 1, slot + 2, slot + 3, slot + 4});
    return trace_out_qubits(un, {slot + 1, slot + 2, slot + 3, slot + 4});
}

// Applies the tabulated recovery word for the syndrome to the code block.
inline cmatrix correct(const StabilizerCode& code, const cmatrix& rho, const Syndrome& syndrome,
                       int code_start = 0) {
    const int n = qubit_count(rho);
    if (code_start < 0 || code_start + 5 > n)
        throw std::invalid_argument("correct: code block out of range");
    const PauliString& fix = code.syndrome_table[static_cast<std::size_t>(syndrome.value())];
    cmatrix out = rho;
    for (int k = 0; k < 5; ++k)
        if (fix.ops[static_cast<std::size_t>(k)] != Pauli::I)
            out = conjugate_on(out, single_pauli_matrix(fix.ops[static_cast<std::size_t>(k)]),
                               {code_start + k});
    return out;
}

// Reads the syndrome from generator expectation values.  Each expectation
// must be +-1 (the error commutes or anticommutes definitely); mixed cases
// need the sampling route below.
inline Syndrome deterministic_syndrome(const StabilizerCode& code, const cmatrix& rho,
                                       int code_start = 0) {
    const int n = qubit_count(rho);
    if (code_start < 0 || code_start + 5 > n)
        throw std::invalid_argument("deterministic_syndrome: code block out of range");
    const std::vector<int> window{code_start, code_start + 1, code_start + 2, code_start + 3,
                                  code_start + 4};
    Syndrome s;
    for (int i = 0; i < 4; ++i) {
        const double e = expectation_value(rho, code.generators[static_cast<std::size_t>(i)].matrix(), window);
        if (std::abs(std::abs(e) - 1.0) > 1e-6)
            throw std::invalid_argument("deterministic_syndrome: syndrome is not definite");
        s.bits[static_cast<std::size_t>(i)] = e < 0.0;
    }
    return s;
}

struct SyndromeBranch {
    Syndrome syndrome;
    double probability = 0.0;
    cmatrix state;  // empty when the branch has (numerically) zero weight
};

// Exact non-selective syndrome decomposition: projects the code block onto
// each of the 16 stabilizer sectors.  Branch probabilities sum to 1.
inline std::vector<SyndromeBranch> syndrome_branches(const StabilizerCode& code,
                                                     const cmatrix& rho, int code_start = 0) {
    const int n = qubit_count(rho);
    if (code_start < 0 || code_start + 5 > n)
        throw std::invalid_argument("syndrome_branches: code block out of range");
    const std::vector<int> window{code_start, code_start + 1, code_start + 2, code_start + 3,
                                  code_start + 4};
    std::vector<SyndromeBranch> branches(16);
    double total = 0.0;
    for (int v = 0; v < 16; ++v) {
        const Syndrome s = Syndrome::from_value(v);
        cmatrix proj = cmatrix::Identity(32, 32);
        for (int i = 0; i < 4; ++i) {
            const double sign = s.bits[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
            proj = 0.5 * (proj + sign * proj * code.generators[static_cast<std::size_t>(i)].matrix());
        }
        cmatrix projected = conjugate_on(rho, proj, window);
        const double prob = projected.trace().real();
        branches[static_cast<std::size_t>(v)].syndrome = s;
        if (prob > prob_floor) {
            branches[static_cast<std::size_t>(v)].probability = prob;
            branches[static_cast<std::size_t>(v)].state = projected / prob;
        }
        total += std::max(prob, 0.0);
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw internal_error("syndrome_branches: sector probabilities do not sum to 1");
    return branches;
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace detail {

// Controlled Pauli word, applied as a permutation-with-phase instead of a
// dense embedded operator.  Requires a real string phase.
inline void apply_controlled_pauli_inplace(cmatrix& rho, int control, int code_start,
                                           const PauliString& word) {
    const int n = qubit_count(rho);
    std::uint64_t flip = 0, zy = 0;
    int ny = 0;
    for (int k = 0; k < 5; ++k) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - (code_start + k));
        switch (word.ops[static_cast<std::size_t>(k)]) {
            case Pauli::I: break;
            case Pauli::X: flip |= bit; break;
            case Pauli::Y: flip |= bit; zy |= bit; ++ny; break;
            case Pauli::Z: zy |= bit; break;
        }
    }
    if (std::abs(word.phase.imag()) > 1e-14)
        throw std::invalid_argument("apply_controlled_pauli_inplace: phase must be real");
    static constexpr complex iy[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const complex base = word.phase.real() * iy[ny & 3];
    const std::uint64_t cbit = std::uint64_t{1} << (n - 1 - control);
    const auto dim = static_cast<std::uint64_t>(rho.rows());
    const auto phase = [&](std::uint64_t v) {
        return (std::popcount(v & zy) & 1) ? -base : base;
    };

    if (flip == 0) {
        // Diagonal action (Z-type word): phases are +-1.
        for (std::uint64_t v = 0; v < dim; ++v)
            if (v & cbit) rho.row(static_cast<Eigen::Index>(v)) *= phase(v);
        for (std::uint64_t v = 0; v < dim; ++v)
            if (v & cbit) rho.col(static_cast<Eigen::Index>(v)) *= std::conj(phase(v));
        return;
    }
    for (std::uint64_t v = 0; v < dim; ++v) {
        const std::uint64_t w = v ^ flip;
        if ((v & cbit) && v < w) {
            const Eigen::RowVectorXcd tmp = rho.row(static_cast<Eigen::Index>(v));
            rho.row(static_cast<Eigen::Index>(v)) = phase(w) * rho.row(static_cast<Eigen::Index>(w));
            rho.row(static_cast<Eigen::Index>(w)) = phase(v) * tmp;
        }
    }
    for (std::uint64_t c = 0; c < dim; ++c) {
        const std::uint64_t d = c ^ flip;
        if ((c & cbit) && c < d) {
            const cvector tmp = rho.col(static_cast<Eigen::Index>(c));
            rho.col(static_cast<Eigen::Index>(c)) =
                std::conj(phase(d)) * rho.col(static_cast<Eigen::Index>(d));
            rho.col(static_cast<Eigen::Index>(d)) = std::conj(phase(c)) * tmp;
        }
    }
}

}  // namespace detail

struct SyndromeMeasurement {
    Syndrome syndrome;
    cmatrix state;  // post-measurement state, measurement ancillas removed
};

// Ancilla-coupled syndrome extraction: the last four qubits must be fresh
// |0> ancillas; each is Hadamard-sandwiched around a controlled generator
// and then measured projectively, consuming one uniform draw per ancilla.
inline SyndromeMeasurement measure_syndrome(const StabilizerCode& code, const cmatrix& rho,
                                            int code_start, std::mt19937_64& rng) {
    const int n = qubit_count(rho);
    if (n < 9) throw std::invalid_argument("measure_syndrome: need 5 code qubits + 4 ancillas");
    if (code_start < 0 || code_start + 5 > n - 4)
        throw std::invalid_argument("measure_syndrome: code block overlaps the ancillas");
    for (int a = n - 4; a < n; ++a) {
        const cmatrix marg = keep_qubits(rho, {a});
        if ((marg - projector0()).cwiseAbs().maxCoeff() > 1e-9)
            throw std::invalid_argument("measure_syndrome: ancilla is not reset to |0>");
    }

    cmatrix work = rho;
    const cmatrix h = hadamard_matrix();
    for (int i = 0; i < 4; ++i) {
        const int anc = n - 4 + i;
        work = conjugate_on(work, h, {anc});
        detail::apply_controlled_pauli_inplace(work, anc, code_start,
                                               code.generators[static_cast<std::size_t>(i)]);
        work = conjugate_on(work, h, {anc});
    }

    Syndrome s;
    for (int i = 0; i < 4; ++i) {
        const int anc = n - 4 + i;
        const double u = uniform01(rng);
        auto [p1, state1] = project_qubit(work, anc, 1);
        if (u < p1) {
            s.bits[static_cast<std::size_t>(i)] = true;
            work = std::move(state1);
        } else {
            auto [p0, state0] = project_qubit(work, anc, 0);
            if (p0 <= prob_floor) throw internal_error("measure_syndrome: zero-probability branch");
            work = std::move(state0);
        }
    }
    return {s, trace_out_qubits(work, {n - 4, n - 3, n - 2, n - 1})};
}

inline SyndromeMeasurement measure_syndrome(const StabilizerCode& code, const cmatrix& rho,
                                            int code_start, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return measure_syndrome(code, rho, code_start, rng);
}

}  // namespace densecode
