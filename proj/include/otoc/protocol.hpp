#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "otoc/noise.hpp"
#include "otoc/rng.hpp"
#include "otoc/spinchain.hpp"
#include "otoc/statevector.hpp"
#include "otoc/tfd.hpp"

namespace otoc {

// Step pattern for the digitized evolution, durations in units of 1/J. The
// default widens the last step so the cumulative grid lands on {0.2, 0.4, 0.8}.
struct TrotterSchedule {
    std::vector<double> step_durations{0.2, 0.2, 0.4};
    // Prefix sums (t = 0 excluded); durations must be positive and finite.
    std::vector<double> cumulative_times() const;
};

enum class PrepMode { EXACT_TFD, VARIATIONAL };
enum class EvolutionMode { TROTTER, EXACT };

// One measurement configuration. The perturbation is a Pauli on copy-A site
// w_site; the correlator reads sigma-z on site v_site of both copies. Sites
// are 1-based chain labels.
struct OtocExperiment {
    TfimParams tfim;
    Temperature temp = Temperature::infinite();
    PrepMode prep = PrepMode::EXACT_TFD;
    // VARIATIONAL only: fixed preparation angles. Left empty, the runner
    // solves for them with default optimizer settings on a substream of seed.
    std::optional<TfdParameters> prep_params;
    int w_site = 1;
    char w_pauli = 'X'; // 'X' or 'Z'; the gate alphabet carries no bare Y
    int v_site = 1;
    char v_pauli = 'Z'; // shots are computational-basis, so V stays diagonal
    TrotterSchedule schedule;
    EvolutionMode evolution = EvolutionMode::TROTTER;
    long shots = 0; // 0 = expectation mode, no sampling columns
    std::optional<NoiseModel> noise;
    std::uint64_t seed = 1;
    // Pads every time point's circuit to the deepest one's gate counts so the
    // noise exposure is depth-independent. TROTTER evolution only.
    bool pad_depth = false;
    // Sweep hook: pad to these counts instead of the experiment's own deepest
    // circuit, so different preparations can share one depth.
    std::optional<GateCounts> pad_target;
};

// One cumulative time on the measured curve. The sampling fields are present
// only when shots were requested; o_postselected and std_error stay absent
// when postselection keeps nothing (kept_fraction 0).
struct OtocPoint {
    double t = 0.0;
    double o_exact = 0.0; // eigenbasis oracle value
    double o_state = 0.0; // noiseless protocol expectation, chosen evolution
    std::optional<double> o_sampled;      // mean over all shots, noise included
    std::optional<double> o_postselected; // mean over the odd-parity shots
    std::optional<double> kept_fraction;
    std::optional<double> std_error; // kept-sample deviation / sqrt(kept)
};

struct OtocSeries {
    std::vector<OtocPoint> points;
    // The point at time t (within 1e-9); ArgumentError when absent. The
    // rvalue overload returns a copy, so run_experiment(e).at_time(t) cannot
    // dangle.
    const OtocPoint& at_time(double t) const&;
    OtocPoint at_time(double t) const&&;
};

enum class SeriesField { O_EXACT, O_STATE, O_SAMPLED, O_POSTSELECTED };

// Finite-difference decay rate between the two late grid times, units of J.
struct DecayRate {
    double lambda = 0.0;
    double t_early = 0.4;
    double t_late = 0.8;
};

// One first-order split step of e^{-i (H_A - H_B) dt}: XX on the copy-A bonds,
// RZ on the copy-A fields, then the same with negated angles on copy B.
Circuit build_trotter_step(const TfimParams& p, double dt);

// Keeps the odd-weight shots. The perturbed state has joint parity -1, and
// the product of sigma-z over all qubits is conserved, so even-weight shots
// can only arise through physical error.
struct Postselection {
    std::vector<std::string> kept;
    double kept_fraction = 0.0;
};
Postselection postselect(const std::vector<std::string>& shots);

// Appends identity-acting filler on already-used wires until the gate counts
// match target: inverse rotation pairs, plus one full-turn rotation when a
// deficit is odd. Under noise the filler is exposed like any other gate.
Circuit pad_to_depth(const Circuit& circuit, const GateCounts& target);

// The pipeline per cumulative time t (t = 0 reported first): prepare the
// purification, perturb copy A, evolve both copies, read the mirrored
// correlator, and sample with postselection when shots are set.
OtocSeries run_experiment(const OtocExperiment& exp);

// (O(t_late) - O(t_early)) / (t_late - t_early) on the chosen series field;
// ArgumentError when either point or value is missing.
DecayRate decay_rate(const OtocSeries& series, SeriesField use);

// Per-temperature results; decay rates are absent when the series lacks the
// finite-difference times or the field was never sampled.
struct SweepEntry {
    OtocSeries series;
    std::optional<DecayRate> lambda_exact;
    std::optional<DecayRate> lambda_state;
    std::optional<DecayRate> lambda_sampled;
    std::optional<DecayRate> lambda_postselected;
};

// Runs the base experiment at each temperature on substream (seed, index).
// Variational angles are resolved per temperature; with pad_depth set, one
// common depth target is used across the whole sweep. Temperatures fan out
// over `jobs` threads, and the merge order is deterministic regardless.
std::map<Temperature, SweepEntry> temperature_sweep(const OtocExperiment& base,
                                                    const std::vector<Temperature>& temps,
                                                    int jobs = 1);

} // namespace otoc
