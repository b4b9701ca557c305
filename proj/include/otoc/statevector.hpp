#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "otoc/errors.hpp"
#include "otoc/rng.hpp"

namespace otoc {

using cdouble = std::complex<double>;

// Memory guard: 2^26 complex amplitudes (1 GiB).
inline constexpr int kMaxQubits = 26;

enum class GateKind { RZ, RX, XX, ZZ, PauliX, PauliZ };

bool is_rotation(GateKind kind); // has an angle parameter
int gate_arity(GateKind kind);
std::string gate_name(GateKind kind);

// One gate in the native alphabet. Rotation conventions:
//   RZ(t) = exp(-i t/2 Z),  RX(t) = exp(-i t/2 X),
//   XX(t) = exp(-i t/2 X(x)X),  ZZ(t) = exp(-i t/2 Z(x)Z).
// Angles are radians.
struct GateOp {
    GateKind kind;
    std::array<int, 2> targets{-1, -1}; // targets[1] == -1 for one-qubit gates
    double angle = 0.0;

    static GateOp rz(int q, double theta) { return {GateKind::RZ, {q, -1}, theta}; }
    static GateOp rx(int q, double theta) { return {GateKind::RX, {q, -1}, theta}; }
    static GateOp xx(int a, int b, double theta) { return {GateKind::XX, {a, b}, theta}; }
    static GateOp zz(int a, int b, double theta) { return {GateKind::ZZ, {a, b}, theta}; }
    static GateOp pauli_x(int q) { return {GateKind::PauliX, {q, -1}, 0.0}; }
    static GateOp pauli_z(int q) { return {GateKind::PauliZ, {q, -1}, 0.0}; }

    int arity() const { return gate_arity(kind); }
    bool is_two_qubit() const { return arity() == 2; }
};

struct GateCounts {
    long one_qubit = 0;
    long two_qubit = 0;
    friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

struct Circuit {
    int n_qubits = 0;
    std::vector<GateOp> ops;

    explicit Circuit(int n = 0) : n_qubits(n) {}

    Circuit& append(const GateOp& op);
    Circuit& append(const Circuit& other); // concatenate; qubit counts must match
    GateCounts counts() const;
};

// Dense amplitude vector over the 2^n computational basis states.
// Basis index b encodes qubit k as bit k of b (qubit 0 = least significant bit).
class StateVector {
public:
    explicit StateVector(int n_qubits); // |0...0>

    int n_qubits() const { return n_qubits_; }
    std::uint64_t dim() const { return amp_.size(); }

    cdouble& amp(std::uint64_t b) { return amp_[b]; }
    const cdouble& amp(std::uint64_t b) const { return amp_[b]; }

    std::span<cdouble> amplitudes() { return amp_; }
    std::span<const cdouble> amplitudes() const { return amp_; }

    double norm_sq() const;

private:
    int n_qubits_;
    std::vector<cdouble> amp_;
};

// Pauli word, one letter from {I, X, Y, Z} per qubit.
class PauliString {
public:
    explicit PauliString(int n_qubits) : letters_(n_qubits, 'I') {}
    explicit PauliString(std::string letters);

    static PauliString single(int n_qubits, int qubit, char letter);
    static PauliString all(int n_qubits, char letter);

    int size() const { return static_cast<int>(letters_.size()); }
    char letter(int q) const { return letters_[q]; }
    PauliString& set(int qubit, char letter);
    const std::string& letters() const { return letters_; }
    int weight() const; // number of non-identity letters

private:
    std::string letters_;
};

void apply_gate(StateVector& state, const GateOp& op);
void apply_circuit(StateVector& state, const Circuit& circuit);

// Bare Pauli application (used by the noise sampler; Y is exact, including phase).
void apply_pauli(StateVector& state, int qubit, char letter);

// <psi|P|psi> for Hermitian P; the imaginary residual must be <= 1e-9.
double expectation_pauli(const StateVector& state, const PauliString& p);

std::complex<double> inner_product(const StateVector& a, const StateVector& b);

// |<a|b>|^2; insensitive to global phase.
double fidelity(const StateVector& a, const StateVector& b);

// Computational-basis samples. A bitstring has one character per qubit,
// qubit 0 first; '1' marks the qubit in |1>.
std::string index_to_bitstring(std::uint64_t b, int n_qubits);
std::uint64_t bitstring_to_index(const std::string& bits);

std::vector<std::string> sample_bitstrings(const StateVector& state, long shots, Rng& rng);
std::vector<std::string> sample_bitstrings(const StateVector& state, long shots, std::uint64_t seed);

} // namespace otoc
