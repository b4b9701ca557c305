#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "otoc/rng.hpp"
#include "otoc/spinchain.hpp"
#include "otoc/statevector.hpp"

namespace otoc {

// Which variational family prepares the purification. The infinite-temperature
// shape has two angles and is exact at theta1 = theta2 = 0.5; the finite
// families carry extra layers to build the temperature-dependent correlations.
enum class TfdLayout { INFINITE_T, FINITE_T, ZERO_T };

// One gate slot of an ansatz: the gate, its wires, and which angle drives it.
// The effective rotation is thetas[param_slot] * scale, in units of pi. A
// param_slot of -1 marks a fixed gate whose rotation is scale alone (again in
// units of pi); the standard layouts use fixed gates for the structural
// layers that no parameter should move.
struct AnsatzGate {
    GateKind kind;
    std::array<int, 2> targets{-1, -1};
    int param_slot = 0;
    double scale = 1.0;
};

class TfdAnsatz {
public:
    TfdAnsatz(int n_sites, TfdLayout layout, int n_params, std::vector<AnsatzGate> gates);

    // The default wiring for a layout (see the layout comments in tfd.cpp).
    static TfdAnsatz standard(int n_sites, TfdLayout layout);
    // INFINITE_T for infinite, ZERO_T for zero, FINITE_T otherwise.
    static TfdAnsatz standard_for_temperature(int n_sites, const Temperature& temp);

    int n_sites() const { return n_sites_; }
    int n_qubits() const { return 2 * n_sites_; }
    TfdLayout layout() const { return layout_; }
    int n_params() const { return n_params_; }
    const std::vector<AnsatzGate>& gates() const { return gates_; }

private:
    int n_sites_;
    TfdLayout layout_;
    int n_params_;
    std::vector<AnsatzGate> gates_;
};

// Preparation angles in units of pi, as published.
struct TfdParameters {
    std::vector<double> thetas;
    Temperature temperature = Temperature::infinite();
};

// The published preparation angles for the seven-temperature grid.
// Temperatures outside the grid raise NotFoundError; optimize instead.
TfdParameters reference_parameters(const Temperature& temp);

// Instantiates the ansatz at the given angles. Units of pi are converted to
// radians here and nowhere else.
Circuit build_tfd_circuit(const TfdAnsatz& ansatz, const TfdParameters& params);

// |<exact|prepared>|^2; insensitive to global phase.
double tfd_fidelity(const StateVector& prepared, const StateVector& exact);

struct OptimizerSettings {
    int restarts = 20;
    int max_evaluations = 2000; // per restart
    double simplex_tolerance = 1e-6;
    std::uint64_t seed = 20220517;
};

struct TfdOptimum {
    TfdParameters params;
    double fidelity = 0.0;
    long evaluations = 0;
};

// Derivative-free simplex search over the ansatz angles against the exact
// purification, restarted from random points in (-1, 1]^n (units of pi).
// Deterministic for a fixed settings.seed; the best restart wins, earliest
// restart breaking ties.
TfdOptimum optimize_tfd(const TfdAnsatz& ansatz, const Temperature& temp,
                        const SpectralDecomposition& sd, const OptimizerSettings& settings);

} // namespace otoc
