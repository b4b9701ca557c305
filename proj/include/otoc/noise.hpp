#pragma once

#include <string>

#include "otoc/rng.hpp"
#include "otoc/statevector.hpp"

namespace otoc {

// Stochastic Pauli picture of the hardware error budget. Each gate triggers
// one error event with the arity-matched probability; defaults take p = 1 - F
// from the reported gate fidelities, and the readout flip rate matches the
// quoted preparation-and-measurement error.
struct NoiseModel {
    double p1 = 0.005;       // per one-qubit gate
    double p2 = 0.015;       // per two-qubit gate
    double p_readout = 0.01; // per measured bit
};

// All three probabilities must lie in [0, 1].
void validate_noise_model(const NoiseModel& nm);

// One Monte Carlo trajectory: after every gate, with probability p1 or p2 by
// arity, one Pauli drawn uniformly from the non-identity choices on the
// gate's wires ({X, Y, Z} for one qubit, the 15 two-qubit words otherwise).
// The state stays pure and normalized; deterministic for a fixed rng.
void apply_noisy_circuit(StateVector& state, const Circuit& circuit, const NoiseModel& nm,
                         Rng& rng);

// Flips each measured bit independently with probability p_readout.
std::string apply_readout_noise(const std::string& bits, double p_readout, Rng& rng);

} // namespace otoc
