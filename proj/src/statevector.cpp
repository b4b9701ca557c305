#include "otoc/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace otoc {

namespace {

constexpr cdouble kImag{0.0, 1.0};

void check_target(int q, int n_qubits, const GateOp& op) {
    if (q < 0 || q >= n_qubits) {
        throw ArgumentError(gate_name(op.kind) + " target " + std::to_string(q) +
                            " out of range for " + std::to_string(n_qubits) + " qubits");
    }
}

void check_op(const GateOp& op, int n_qubits) {
    check_target(op.targets[0], n_qubits, op);
    if (op.arity() == 2) {
        check_target(op.targets[1], n_qubits, op);
        if (op.targets[0] == op.targets[1]) {
            throw ArgumentError(gate_name(op.kind) + " targets must be distinct, got " +
                                std::to_string(op.targets[0]) + " twice");
        }
    }
    if (!std::isfinite(op.angle)) {
        throw ArgumentError(gate_name(op.kind) + " angle is not finite");
    }
}

} // namespace

bool is_rotation(GateKind kind) {
    return kind != GateKind::PauliX && kind != GateKind::PauliZ;
}

int gate_arity(GateKind kind) {
    return (kind == GateKind::XX || kind == GateKind::ZZ) ? 2 : 1;
}

std::string gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::RZ: return "RZ";
        case GateKind::RX: return "RX";
        case GateKind::XX: return "XX";
        case GateKind::ZZ: return "ZZ";
        case GateKind::PauliX: return "X";
        case GateKind::PauliZ: return "Z";
    }
    return "?";
}

Circuit& Circuit::append(const GateOp& op) {
    check_op(op, n_qubits);
    ops.push_back(op);
    return *this;
}

Circuit& Circuit::append(const Circuit& other) {
    if (other.n_qubits != n_qubits) {
        throw ArgumentError("cannot concatenate circuits on " + std::to_string(other.n_qubits) +
                            " and " + std::to_string(n_qubits) + " qubits");
    }
    ops.insert(ops.end(), other.ops.begin(), other.ops.end());
    return *this;
}

GateCounts Circuit::counts() const {
    GateCounts c;
    for (const auto& op : ops) (op.is_two_qubit() ? c.two_qubit : c.one_qubit)++;
    return c;
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                            std::to_string(n_qubits));
    }
    amp_.assign(std::uint64_t{1} << n_qubits, cdouble{0.0, 0.0});
    amp_[0] = cdouble{1.0, 0.0};
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return s;
}

PauliString::PauliString(std::string letters) : letters_(std::move(letters)) {
    for (char c : letters_) {
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw ArgumentError(std::string("invalid Pauli letter '") + c + "'");
        }
    }
}

PauliString PauliString::single(int n_qubits, int qubit, char letter) {
    PauliString p(n_qubits);
    p.set(qubit, letter);
    return p;
}

PauliString PauliString::all(int n_qubits, char letter) {
    PauliString p(n_qubits);
    for (int q = 0; q < n_qubits; ++q) p.set(q, letter);
    return p;
}

PauliString& PauliString::set(int qubit, char letter) {
    if (qubit < 0 || qubit >= size()) {
        throw ArgumentError("Pauli qubit " + std::to_string(qubit) + " out of range");
    }
    if (letter != 'I' && letter != 'X' && letter != 'Y' && letter != 'Z') {
        throw ArgumentError(std::string("invalid Pauli letter '") + letter + "'");
    }
    letters_[qubit] = letter;
    return *this;
}

int PauliString::weight() const {
    return static_cast<int>(std::count_if(letters_.begin(), letters_.end(),
                                          [](char c) { return c != 'I'; }));
}

namespace {

// One-qubit |0>/|1> pair sweep: f(a0, a1) updates both amplitudes.
template <typename F>
void for_each_pair(StateVector& state, int q, F&& f) {
    const std::uint64_t dim = state.dim();
    const std::uint64_t mask = std::uint64_t{1} << q;
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (b & mask) continue;
        f(state.amp(b), state.amp(b | mask));
    }
}

void apply_rz(StateVector& state, int q, double theta) {
    const cdouble p0 = std::exp(-kImag * (theta / 2.0));
    const cdouble p1 = std::exp(kImag * (theta / 2.0));
    for_each_pair(state, q, [&](cdouble& a0, cdouble& a1) {
        a0 *= p0;
        a1 *= p1;
    });
}

void apply_rx(StateVector& state, int q, double theta) {
    const double c = std::cos(theta / 2.0);
    const cdouble ms = -kImag * std::sin(theta / 2.0);
    for_each_pair(state, q, [&](cdouble& a0, cdouble& a1) {
        const cdouble t0 = a0, t1 = a1;
        a0 = c * t0 + ms * t1;
        a1 = ms * t0 + c * t1;
    });
}

// XX(t) = cos(t/2) I - i sin(t/2) X(x)X pairs b with b ^ (mask_a|mask_b).
void apply_xx(StateVector& state, int qa, int qb, double theta) {
    const double c = std::cos(theta / 2.0);
    const cdouble ms = -kImag * std::sin(theta / 2.0);
    const std::uint64_t dim = state.dim();
    const std::uint64_t ma = std::uint64_t{1} << qa;
    const std::uint64_t flip = ma | (std::uint64_t{1} << qb);
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (b & ma) continue; // visit each {b, b^flip} orbit once
        const std::uint64_t p = b ^ flip;
        const cdouble t0 = state.amp(b), t1 = state.amp(p);
        state.amp(b) = c * t0 + ms * t1;
        state.amp(p) = ms * t0 + c * t1;
    }
}

void apply_zz(StateVector& state, int qa, int qb, double theta) {
    const cdouble peven = std::exp(-kImag * (theta / 2.0)); // z_a z_b = +1
    const cdouble podd = std::exp(kImag * (theta / 2.0));
    const std::uint64_t dim = state.dim();
    const std::uint64_t ma = std::uint64_t{1} << qa;
    const std::uint64_t mb = std::uint64_t{1} << qb;
    for (std::uint64_t b = 0; b < dim; ++b) {
        const bool same = ((b & ma) != 0) == ((b & mb) != 0);
        state.amp(b) *= same ? peven : podd;
    }
}

void apply_pauli_x(StateVector& state, int q) {
    for_each_pair(state, q, [](cdouble& a0, cdouble& a1) { std::swap(a0, a1); });
}

void apply_pauli_y(StateVector& state, int q) {
    for_each_pair(state, q, [](cdouble& a0, cdouble& a1) {
        const cdouble t0 = a0;
        a0 = -kImag * a1;
        a1 = kImag * t0;
    });
}

void apply_pauli_z(StateVector& state, int q) {
    for_each_pair(state, q, [](cdouble&, cdouble& a1) { a1 = -a1; });
}

} // namespace

void apply_gate(StateVector& state, const GateOp& op) {
    check_op(op, state.n_qubits());
    switch (op.kind) {
        case GateKind::RZ: apply_rz(state, op.targets[0], op.angle); break;
        case GateKind::RX: apply_rx(state, op.targets[0], op.angle); break;
        case GateKind::XX: apply_xx(state, op.targets[0], op.targets[1], op.angle); break;
        case GateKind::ZZ: apply_zz(state, op.targets[0], op.targets[1], op.angle); break;
        case GateKind::PauliX: apply_pauli_x(state, op.targets[0]); break;
        case GateKind::PauliZ: apply_pauli_z(state, op.targets[0]); break;
    }
}

void apply_circuit(StateVector& state, const Circuit& circuit) {
    if (circuit.n_qubits != state.n_qubits()) {
        throw ArgumentError("circuit on " + std::to_string(circuit.n_qubits) +
                            " qubits applied to " + std::to_string(state.n_qubits()) +
                            "-qubit state");
    }
    for (const auto& op : circuit.ops) apply_gate(state, op);
}

void apply_pauli(StateVector& state, int qubit, char letter) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        throw ArgumentError("Pauli qubit " + std::to_string(qubit) + " out of range");
    }
    switch (letter) {
        case 'I': break;
        case 'X': apply_pauli_x(state, qubit); break;
        case 'Y': apply_pauli_y(state, qubit); break;
        case 'Z': apply_pauli_z(state, qubit); break;
        default: throw ArgumentError(std::string("invalid Pauli letter '") + letter + "'");
    }
}

double expectation_pauli(const StateVector& state, const PauliString& p) {
    if (p.size() != state.n_qubits()) {
        throw ArgumentError("Pauli string length " + std::to_string(p.size()) +
                            " does not match " + std::to_string(state.n_qubits()) + " qubits");
    }
    // P|b> = phase(b) |b ^ xmask>; phase factors: Z: (-1)^bit, Y: i (bit 0) / -i (bit 1).
    std::uint64_t xmask = 0, zmask = 0, ymask = 0;
    for (int q = 0; q < p.size(); ++q) {
        const std::uint64_t m = std::uint64_t{1} << q;
        switch (p.letter(q)) {
            case 'X': xmask |= m; break;
            case 'Y': xmask |= m; ymask |= m; break;
            case 'Z': zmask |= m; break;
            default: break;
        }
    }
    const int n_y = std::popcount(ymask);
    cdouble acc{0.0, 0.0};
    const std::uint64_t dim = state.dim();
    for (std::uint64_t b = 0; b < dim; ++b) {
        const int neg = std::popcount(b & zmask) + std::popcount(b & ymask);
        cdouble phase = (neg & 1) ? cdouble{-1.0, 0.0} : cdouble{1.0, 0.0};
        switch (n_y & 3) { // i^n_y
            case 1: phase *= kImag; break;
            case 2: phase = -phase; break;
            case 3: phase *= -kImag; break;
            default: break;
        }
        acc += phase * std::conj(state.amp(b ^ xmask)) * state.amp(b);
    }
    if (std::abs(acc.imag()) > 1e-9) {
        throw ConsistencyError("Pauli expectation has imaginary residual " +
                               std::to_string(acc.imag()));
    }
    return acc.real();
}

std::complex<double> inner_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw ArgumentError("inner product between states on " + std::to_string(a.n_qubits()) +
                            " and " + std::to_string(b.n_qubits()) + " qubits");
    }
    cdouble acc{0.0, 0.0};
    const std::uint64_t dim = a.dim();
    for (std::uint64_t i = 0; i < dim; ++i) acc += std::conj(a.amp(i)) * b.amp(i);
    return acc;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

std::string index_to_bitstring(std::uint64_t b, int n_qubits) {
    std::string s(n_qubits, '0');
    for (int q = 0; q < n_qubits; ++q) {
        if (b & (std::uint64_t{1} << q)) s[q] = '1';
    }
    return s;
}

std::uint64_t bitstring_to_index(const std::string& bits) {
    std::uint64_t b = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') b |= std::uint64_t{1} << q;
        else if (bits[q] != '0') throw ArgumentError("invalid bitstring character");
    }
    return b;
}

std::vector<std::string> sample_bitstrings(const StateVector& state, long shots, Rng& rng) {
    if (shots < 1) throw ArgumentError("shots must be >= 1, got " + std::to_string(shots));
    const std::uint64_t dim = state.dim();
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (std::uint64_t b = 0; b < dim; ++b) {
        acc += std::norm(state.amp(b));
        cdf[b] = acc;
    }
    // acc == 1 within 1e-9 for any unitary-evolved state; normalize the draw instead
    // of the state so a tiny norm drift cannot push a draw past the last bucket.
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(shots));
    for (long s = 0; s < shots; ++s) {
        const double u = rng.next_double() * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::uint64_t b = std::min<std::uint64_t>(
            static_cast<std::uint64_t>(it - cdf.begin()), dim - 1);
        out.push_back(index_to_bitstring(b, state.n_qubits()));
    }
    return out;
}

std::vector<std::string> sample_bitstrings(const StateVector& state, long shots,
                                           std::uint64_t seed) {
    Rng rng(seed);
    return sample_bitstrings(state, shots, rng);
}

} // namespace otoc
