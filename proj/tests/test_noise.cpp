#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "otoc/errors.hpp"
#include "otoc/noise.hpp"
#include "otoc/protocol.hpp"

using namespace otoc;

namespace {

double state_distance(const StateVector& a, const StateVector& b) {
    double ss = 0.0;
    for (std::uint64_t i = 0; i < a.dim(); ++i) ss += std::norm(a.amp(i) - b.amp(i));
    return std::sqrt(ss);
}

constexpr std::array<char, 4> kLetters{'I', 'X', 'Y', 'Z'};

} // namespace

TEST_CASE("noise model probabilities are validated") {
    CHECK_NOTHROW(validate_noise_model(NoiseModel{}));
    CHECK_NOTHROW(validate_noise_model(NoiseModel{0.0, 1.0, 0.5}));
    CHECK_THROWS_AS(validate_noise_model(NoiseModel{-0.1, 0.0, 0.0}), ArgumentError);
    CHECK_THROWS_AS(validate_noise_model(NoiseModel{0.0, 1.5, 0.0}), ArgumentError);
    CHECK_THROWS_AS(validate_noise_model(NoiseModel{0.0, 0.0, std::nan("")}), ArgumentError);
}

TEST_CASE("zero error probability reproduces the noiseless circuit") {
    Circuit circuit(3);
    circuit.append(GateOp::xx(0, 1, 0.7))
        .append(GateOp::rz(2, -0.3))
        .append(GateOp::zz(1, 2, 0.9))
        .append(GateOp::pauli_x(0));

    Rng rng(5);
    StateVector start = testutil::random_state(3, rng);
    StateVector plain = start;
    StateVector silent = start;
    apply_circuit(plain, circuit);
    Rng noise_rng(123);
    apply_noisy_circuit(silent, circuit, NoiseModel{0.0, 0.0, 0.0}, noise_rng);
    CHECK(state_distance(plain, silent) == 0.0);
}

TEST_CASE("two-qubit error words are drawn uniformly") {
    Circuit circuit(2);
    circuit.append(GateOp::xx(0, 1, 0.7));

    Rng rng(29);
    const StateVector start = testutil::random_state(2, rng);
    StateVector clean = start;
    apply_circuit(clean, circuit);

    // The 15 corruptions of a generic state are pairwise distinguishable,
    // which makes the per-trajectory classification below unambiguous.
    std::vector<StateVector> corrupted;
    for (int word = 1; word < 16; ++word) {
        StateVector s = clean;
        apply_pauli(s, 0, kLetters[word / 4]);
        apply_pauli(s, 1, kLetters[word % 4]);
        corrupted.push_back(std::move(s));
    }
    for (std::size_t a = 0; a < corrupted.size(); ++a) {
        for (std::size_t b = a + 1; b < corrupted.size(); ++b) {
            REQUIRE(fidelity(corrupted[a], corrupted[b]) < 0.9);
        }
    }

    const int trials = 10000;
    std::array<int, 15> counts{};
    NoiseModel certain;
    certain.p2 = 1.0;
    Rng noise_rng(77);
    for (int trial = 0; trial < trials; ++trial) {
        StateVector s = start;
        apply_noisy_circuit(s, circuit, certain, noise_rng);
        int matched = -1;
        for (std::size_t k = 0; k < corrupted.size(); ++k) {
            if (fidelity(s, corrupted[k]) > 0.99) {
                matched = static_cast<int>(k);
                break;
            }
        }
        REQUIRE(matched >= 0);
        ++counts[matched];
    }
    // Binomial with p = 1/15: mean 666.7, sigma about 25; allow 5 sigma.
    for (int c : counts) {
        CHECK(c > 542);
        CHECK(c < 792);
    }
}

TEST_CASE("single-qubit errors cover the three letters evenly") {
    Circuit circuit(1);
    circuit.append(GateOp::rz(0, 0.4));

    Rng rng(31);
    const StateVector start = testutil::random_state(1, rng);
    StateVector clean = start;
    apply_circuit(clean, circuit);

    std::vector<StateVector> corrupted;
    for (int k = 1; k < 4; ++k) {
        StateVector s = clean;
        apply_pauli(s, 0, kLetters[k]);
        corrupted.push_back(std::move(s));
    }
    for (std::size_t a = 0; a < corrupted.size(); ++a) {
        for (std::size_t b = a + 1; b < corrupted.size(); ++b) {
            REQUIRE(fidelity(corrupted[a], corrupted[b]) < 0.9);
        }
    }

    const int trials = 3000;
    std::array<int, 3> counts{};
    NoiseModel certain;
    certain.p1 = 1.0;
    Rng noise_rng(78);
    for (int trial = 0; trial < trials; ++trial) {
        StateVector s = start;
        apply_noisy_circuit(s, circuit, certain, noise_rng);
        int matched = -1;
        for (std::size_t k = 0; k < corrupted.size(); ++k) {
            if (fidelity(s, corrupted[k]) > 0.99) {
                matched = static_cast<int>(k);
                break;
            }
        }
        REQUIRE(matched >= 0);
        ++counts[matched];
    }
    // Mean 1000, sigma about 26; allow 5 sigma.
    for (int c : counts) {
        CHECK(c > 870);
        CHECK(c < 1130);
    }
}

TEST_CASE("trajectories stay normalized through deep circuits") {
    Circuit circuit(6);
    circuit.append(build_tfd_circuit(TfdAnsatz::standard(3, TfdLayout::INFINITE_T),
                                     {{0.5, 0.5}, Temperature::infinite()}));
    circuit.append(GateOp::pauli_x(0));
    for (double dt : {0.2, 0.2, 0.4}) circuit.append(build_trotter_step({3, 1.0, 1.0}, dt));

    Rng noise_rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        StateVector s(6);
        apply_noisy_circuit(s, circuit, NoiseModel{}, noise_rng);
        CHECK(std::abs(s.norm_sq() - 1.0) <= 1e-9);
    }
}

TEST_CASE("trajectory average converges to the analytic channel") {
    Circuit circuit(2);
    circuit.append(GateOp::xx(0, 1, 0.7));
    NoiseModel nm;
    nm.p2 = 0.3;

    Rng rng(41);
    const StateVector start = testutil::random_state(2, rng);
    StateVector clean = start;
    apply_circuit(clean, circuit);

    // (1 - p) sigma + p/15 sum_P P sigma P over the 15 non-identity words.
    DenseOperator sigma(4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) sigma.at(r, c) = clean.amp(r) * std::conj(clean.amp(c));
    }
    DenseOperator expected(4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) expected.at(r, c) = (1.0 - nm.p2) * sigma.at(r, c);
    }
    for (int word = 1; word < 16; ++word) {
        PauliString p(2);
        p.set(0, kLetters[word / 4]).set(1, kLetters[word % 4]);
        const DenseOperator pm = pauli_matrix(p);
        const DenseOperator term = testutil::matmul(pm, testutil::matmul(sigma, pm));
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) expected.at(r, c) += nm.p2 / 15.0 * term.at(r, c);
        }
    }

    const int trials = 100000;
    DenseOperator averaged(4);
    Rng noise_rng(55);
    for (int trial = 0; trial < trials; ++trial) {
        StateVector s = start;
        apply_noisy_circuit(s, circuit, nm, noise_rng);
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                averaged.at(r, c) += s.amp(r) * std::conj(s.amp(c)) / double(trials);
            }
        }
    }
    CHECK(testutil::max_abs_diff(averaged, expected) < 0.01);
}

TEST_CASE("readout noise flips bits independently") {
    Rng rng(61);
    CHECK(apply_readout_noise("010011", 0.0, rng) == "010011");
    CHECK(apply_readout_noise("010011", 1.0, rng) == "101100");
    CHECK_THROWS_AS(apply_readout_noise("0a01", 0.5, rng), ArgumentError);
    CHECK_THROWS_AS(apply_readout_noise("0101", -0.1, rng), ArgumentError);
    CHECK_THROWS_AS(apply_readout_noise("0101", 1.5, rng), ArgumentError);

    long flips = 0;
    const int trials = 100000;
    for (int trial = 0; trial < trials; ++trial) {
        const std::string out = apply_readout_noise("000000", 0.01, rng);
        for (char b : out) flips += b == '1' ? 1 : 0;
    }
    // Binomial(600000, 0.01): mean 6000, sigma about 77; allow 5 sigma.
    CHECK(flips > 5615);
    CHECK(flips < 6385);
}

TEST_CASE("noise damps the correlator and postselection recovers part of it") {
    OtocExperiment exp;
    exp.tfim.n_sites = 3;
    exp.temp = Temperature::infinite();
    exp.shots = 4000;
    exp.noise = NoiseModel{};
    exp.seed = 13;
    const OtocSeries series = run_experiment(exp);

    for (const OtocPoint& p : series.points) {
        CAPTURE(p.t);
        REQUIRE(p.o_sampled.has_value());
        REQUIRE(p.o_postselected.has_value());
        CHECK(*p.kept_fraction > 0.0);
        CHECK(*p.kept_fraction < 1.0);
        // Errors pull the measured value toward zero, postselection pulls
        // part of the way back.
        CHECK(std::abs(*p.o_sampled) < std::abs(p.o_state));
        CHECK(std::abs(*p.o_postselected - p.o_state) < std::abs(*p.o_sampled - p.o_state));
    }
    // Deeper circuits discard more.
    CHECK(*series.points.front().kept_fraction > *series.points.back().kept_fraction);
}

TEST_CASE("stronger two-qubit noise damps the late correlator monotonically") {
    std::vector<double> magnitudes;
    std::vector<double> errors;
    for (double p2 : {0.0, 0.005, 0.015, 0.03}) {
        OtocExperiment exp;
        exp.tfim.n_sites = 3;
        exp.temp = Temperature::infinite();
        exp.shots = 2000;
        NoiseModel nm;
        nm.p2 = p2;
        exp.noise = nm;
        exp.seed = 21;
        const OtocPoint& late = run_experiment(exp).at_time(0.8);
        magnitudes.push_back(std::abs(*late.o_postselected));
        errors.push_back(*late.std_error);
    }
    for (std::size_t i = 1; i < magnitudes.size(); ++i) {
        CHECK(magnitudes[i] <= magnitudes[i - 1] + 3.0 * (errors[i] + errors[i - 1]));
    }
}
