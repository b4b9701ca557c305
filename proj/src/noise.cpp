#include "otoc/noise.hpp"

#include <cmath>

#include "otoc/errors.hpp"

namespace otoc {

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

constexpr char kPauliLetters[4] = {'I', 'X', 'Y', 'Z'};

} // namespace

void validate_noise_model(const NoiseModel& nm) {
    if (!is_probability(nm.p1) || !is_probability(nm.p2) || !is_probability(nm.p_readout)) {
        throw ArgumentError("noise probabilities must lie in [0, 1]");
    }
}

void apply_noisy_circuit(StateVector& state, const Circuit& circuit, const NoiseModel& nm,
                         Rng& rng) {
    validate_noise_model(nm);
    for (const GateOp& op : circuit.ops) {
        apply_gate(state, op);
        if (op.is_two_qubit()) {
            if (rng.next_bool(nm.p2)) {
                // Words 1..15 of the two-letter alphabet; 0 would be II.
                const std::uint64_t word = rng.next_below(15) + 1;
                apply_pauli(state, op.targets[0], kPauliLetters[word / 4]);
                apply_pauli(state, op.targets[1], kPauliLetters[word % 4]);
            }
        } else if (rng.next_bool(nm.p1)) {
            apply_pauli(state, op.targets[0], kPauliLetters[rng.next_below(3) + 1]);
        }
    }
}

std::string apply_readout_noise(const std::string& bits, double p_readout, Rng& rng) {
    if (!is_probability(p_readout)) {
        throw ArgumentError("readout flip probability must lie in [0, 1]");
    }
    std::string out = bits;
    for (char& b : out) {
        if (b != '0' && b != '1') {
            throw ArgumentError("bitstring characters must be '0' or '1'");
        }
        if (rng.next_bool(p_readout)) b = b == '0' ? '1' : '0';
    }
    return out;
}

} // namespace otoc
