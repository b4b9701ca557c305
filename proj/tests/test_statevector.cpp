#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "otoc/errors.hpp"
#include "otoc/rng.hpp"
#include "otoc/spinchain.hpp"
#include "otoc/statevector.hpp"

using namespace otoc;
using testutil::random_state;

namespace {

double amp_distance(const StateVector& a, const StateVector& b) {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < a.dim(); ++i) {
        worst = std::max(worst, std::abs(a.amp(i) - b.amp(i)));
    }
    return worst;
}

GateOp random_gate(int n_qubits, Rng& rng) {
    const double theta = (2.0 * rng.next_double() - 1.0) * M_PI;
    const int q = static_cast<int>(rng.next_below(n_qubits));
    int q2 = static_cast<int>(rng.next_below(n_qubits - 1));
    if (q2 >= q) ++q2;
    switch (rng.next_below(4)) {
        case 0: return GateOp::rz(q, theta);
        case 1: return GateOp::rx(q, theta);
        case 2: return GateOp::xx(q, q2, theta);
        default: return GateOp::zz(q, q2, theta);
    }
}

} // namespace

TEST_CASE("zero state initialization") {
    StateVector one(1);
    CHECK(one.dim() == 2);
    CHECK(one.amp(0) == cdouble{1.0, 0.0});
    CHECK(one.amp(1) == cdouble{0.0, 0.0});

    StateVector two(2);
    CHECK(two.dim() == 4);
    CHECK(two.amp(0) == cdouble{1.0, 0.0});
    for (std::uint64_t b = 1; b < 4; ++b) CHECK(two.amp(b) == cdouble{0.0, 0.0});

    CHECK_THROWS_AS(StateVector(27), CapacityError);
    CHECK_THROWS_AS(StateVector(0), CapacityError);
}

TEST_CASE("xx gate on |00>") {
    StateVector s(2);
    apply_gate(s, GateOp::xx(0, 1, M_PI));
    CHECK(std::abs(s.amp(3) - cdouble{0.0, -1.0}) < 1e-12); // -i|11>
    CHECK(std::abs(s.amp(0)) < 1e-12);

    StateVector h(2);
    apply_gate(h, GateOp::xx(0, 1, M_PI / 2.0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(h.amp(0) - cdouble{r, 0.0}) < 1e-12);
    CHECK(std::abs(h.amp(3) - cdouble{0.0, -r}) < 1e-12);
    CHECK(std::abs(h.amp(1)) < 1e-12);
    CHECK(std::abs(h.amp(2)) < 1e-12);
}

TEST_CASE("zero angle leaves any state unchanged") {
    Rng rng(7);
    StateVector s = random_state(3, rng);
    const StateVector before = s;
    apply_gate(s, GateOp::rz(0, 0.0));
    apply_gate(s, GateOp::rx(1, 0.0));
    apply_gate(s, GateOp::xx(0, 2, 0.0));
    apply_gate(s, GateOp::zz(1, 2, 0.0));
    CHECK(amp_distance(s, before) < 1e-15);
}

TEST_CASE("gate argument validation") {
    StateVector s(3);
    CHECK_THROWS_AS(apply_gate(s, GateOp::rz(3, 0.1)), ArgumentError);
    CHECK_THROWS_AS(apply_gate(s, GateOp::rz(-1, 0.1)), ArgumentError);
    CHECK_THROWS_AS(apply_gate(s, GateOp::xx(1, 1, 0.1)), ArgumentError);
    CHECK_THROWS_AS(apply_gate(s, GateOp::rx(0, std::nan(""))), ArgumentError);
}

TEST_CASE("circuit application order and validation") {
    StateVector s(6);
    Circuit empty(6);
    const StateVector before = s;
    apply_circuit(s, empty);
    CHECK(amp_distance(s, before) == 0.0);

    // Mirrored-pair preparation: XX then RZ makes a Bell pair on (0, 3)
    // with no global phase left over.
    Circuit bell(6);
    bell.append(GateOp::xx(0, 3, M_PI / 2.0)).append(GateOp::rz(0, M_PI / 2.0));
    apply_circuit(s, bell);
    StateVector target(6);
    const double r = 1.0 / std::sqrt(2.0);
    target.amp(0) = r;
    target.amp(0b001001) = r;
    CHECK(fidelity(s, target) == doctest::Approx(1.0).epsilon(1e-12));

    Circuit outside(6);
    CHECK_THROWS_AS(outside.append(GateOp::rz(6, 0.1)), ArgumentError);

    Circuit wrong_width(5);
    wrong_width.append(GateOp::rz(0, 0.1));
    CHECK_THROWS_AS(apply_circuit(s, wrong_width), ArgumentError);
}

TEST_CASE("circuit gate counts") {
    Circuit c(4);
    c.append(GateOp::xx(0, 1, 0.3)).append(GateOp::rz(2, 0.1)).append(GateOp::pauli_x(3));
    const GateCounts counts = c.counts();
    CHECK(counts.one_qubit == 2);
    CHECK(counts.two_qubit == 1);
}

TEST_CASE("pauli expectation values") {
    StateVector zero(1);
    CHECK(expectation_pauli(zero, PauliString("Z")) == doctest::Approx(1.0));
    CHECK(expectation_pauli(zero, PauliString("X")) == doctest::Approx(0.0));

    StateVector bell(2);
    apply_gate(bell, GateOp::xx(0, 1, M_PI / 2.0));
    apply_gate(bell, GateOp::rz(0, M_PI / 2.0));
    CHECK(expectation_pauli(bell, PauliString("ZZ")) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expectation_pauli(bell, PauliString("XX")) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expectation_pauli(bell, PauliString("YY")) == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK_THROWS_AS(expectation_pauli(bell, PauliString("Z")), ArgumentError);
}

TEST_CASE("pauli string construction") {
    PauliString p = PauliString::single(4, 2, 'Y');
    CHECK(p.letters() == "IIYI");
    CHECK(p.weight() == 1);
    CHECK(PauliString::all(3, 'Z').letters() == "ZZZ");
    CHECK(PauliString("IXYZ").weight() == 3);
    CHECK_THROWS_AS(PauliString("ABC"), ArgumentError);
    CHECK_THROWS_AS(PauliString::single(3, 5, 'X'), ArgumentError);
}

TEST_CASE("bare pauli application matches dense matrices") {
    Rng rng(11);
    for (char letter : {'X', 'Y', 'Z'}) {
        for (int q = 0; q < 3; ++q) {
            StateVector s = random_state(3, rng);
            StateVector via_dense = s;
            apply_pauli(s, q, letter);
            testutil::apply_dense(pauli_matrix(PauliString::single(3, q, letter)), via_dense);
            CHECK(amp_distance(s, via_dense) < 1e-14);
        }
    }
}

TEST_CASE("inner product and fidelity") {
    StateVector a(1);
    StateVector b(1);
    CHECK(inner_product(a, b) == cdouble{1.0, 0.0});

    b.amp(0) = 0.0;
    b.amp(1) = 1.0;
    CHECK(inner_product(a, b) == cdouble{0.0, 0.0});

    StateVector plus(1);
    plus.amp(0) = 1.0 / std::sqrt(2.0);
    plus.amp(1) = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(inner_product(a, plus) - cdouble{1.0 / std::sqrt(2.0), 0.0}) < 1e-15);
    CHECK(fidelity(a, plus) == doctest::Approx(0.5).epsilon(1e-12));

    StateVector wide(2);
    CHECK_THROWS_AS(inner_product(a, wide), ArgumentError);
}

TEST_CASE("fidelity ignores global phase") {
    Rng rng(13);
    StateVector s = random_state(4, rng);
    StateVector rotated = s;
    const cdouble phase = std::exp(cdouble{0.0, 0.77});
    for (std::uint64_t i = 0; i < rotated.dim(); ++i) rotated.amp(i) *= phase;
    CHECK(fidelity(s, rotated) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampling from deterministic and entangled states") {
    StateVector zero(1);
    const auto all_zero = sample_bitstrings(zero, 100, 42);
    CHECK(all_zero.size() == 100);
    for (const auto& bits : all_zero) CHECK(bits == "0");

    StateVector bell(2);
    apply_gate(bell, GateOp::xx(0, 1, M_PI / 2.0));
    const long shots = 100000;
    const auto draws = sample_bitstrings(bell, shots, 31415);
    long zeros = 0;
    for (const auto& bits : draws) {
        CHECK((bits == "00" || bits == "11"));
        if (bits == "00") ++zeros;
    }
    const double freq = static_cast<double>(zeros) / shots;
    const double sigma = std::sqrt(0.25 / shots);
    CHECK(std::abs(freq - 0.5) < 5.0 * sigma);

    const auto again = sample_bitstrings(bell, shots, 31415);
    CHECK(draws == again);
    const auto other_seed = sample_bitstrings(bell, shots, 31416);
    CHECK(draws != other_seed);
}

TEST_CASE("sampling matches amplitudes in a chi-squared test") {
    StateVector s(3);
    apply_gate(s, GateOp::rx(0, 0.7));
    apply_gate(s, GateOp::xx(0, 1, 1.1));
    apply_gate(s, GateOp::zz(1, 2, 0.4));
    apply_gate(s, GateOp::rx(2, 2.0));
    apply_gate(s, GateOp::rx(1, 1.3));

    const long shots = 100000;
    const auto draws = sample_bitstrings(s, shots, 90210);
    std::map<std::string, long> counts;
    for (const auto& bits : draws) ++counts[bits];

    double chi2 = 0.0;
    for (std::uint64_t b = 0; b < 8; ++b) {
        const double expected = std::norm(s.amp(b)) * shots;
        REQUIRE(expected > 5.0); // all bins populated for this circuit
        const double observed = static_cast<double>(counts[index_to_bitstring(b, 3)]);
        chi2 += (observed - expected) * (observed - expected) / expected;
    }
    // 7 degrees of freedom, p = 0.001 critical value.
    CHECK(chi2 < 24.32);
}

TEST_CASE("bitstring conversions round-trip") {
    CHECK(index_to_bitstring(0b110, 3) == "011"); // qubit 0 first
    CHECK(bitstring_to_index("011") == 0b110);
    for (std::uint64_t b = 0; b < 16; ++b) {
        CHECK(bitstring_to_index(index_to_bitstring(b, 4)) == b);
    }
    CHECK_THROWS_AS(bitstring_to_index("01x"), ArgumentError);
}

TEST_CASE("norm is preserved by long random circuits") {
    Rng rng(2024);
    StateVector s(12);
    for (int i = 0; i < 200; ++i) apply_gate(s, random_gate(12, rng));
    CHECK(std::abs(s.norm_sq() - 1.0) < 1e-9);
}

TEST_CASE("rotation followed by its inverse is the identity") {
    Rng rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        StateVector s = random_state(5, rng);
        const StateVector before = s;
        const GateOp op = random_gate(5, rng);
        GateOp inverse = op;
        inverse.angle = -op.angle;
        apply_gate(s, op);
        apply_gate(s, inverse);
        CHECK(amp_distance(s, before) < 1e-10);
    }
    // Bare Paulis are involutions.
    StateVector s = random_state(4, rng);
    const StateVector before = s;
    apply_gate(s, GateOp::pauli_x(2));
    apply_gate(s, GateOp::pauli_x(2));
    apply_gate(s, GateOp::pauli_z(1));
    apply_gate(s, GateOp::pauli_z(1));
    CHECK(amp_distance(s, before) < 1e-15);
}

TEST_CASE("disjoint xx gates commute") {
    Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        StateVector forward = random_state(4, rng);
        StateVector reverse = forward;
        const double a = (2.0 * rng.next_double() - 1.0) * M_PI;
        const double b = (2.0 * rng.next_double() - 1.0) * M_PI;
        apply_gate(forward, GateOp::xx(0, 1, a));
        apply_gate(forward, GateOp::xx(2, 3, b));
        apply_gate(reverse, GateOp::xx(2, 3, b));
        apply_gate(reverse, GateOp::xx(0, 1, a));
        CHECK(amp_distance(forward, reverse) < 1e-12);
    }
}

TEST_CASE("gate kernels match the dense unitary oracle") {
    Rng rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_below(3)); // 2..4 qubits
        StateVector via_kernel = random_state(n, rng);
        StateVector via_dense = via_kernel;
        GateOp op = random_gate(n, rng);
        if (rep % 6 == 0) op = GateOp::pauli_x(static_cast<int>(rng.next_below(n)));
        if (rep % 6 == 3) op = GateOp::pauli_z(static_cast<int>(rng.next_below(n)));
        apply_gate(via_kernel, op);
        testutil::apply_dense(gate_matrix(op, n), via_dense);
        CHECK(amp_distance(via_kernel, via_dense) < 1e-12);
    }
}

TEST_CASE("rng substreams are deterministic and distinct") {
    Rng a(99);
    Rng b(99);
    CHECK(a.next_u64() == b.next_u64());
    Rng s0 = a.substream(0);
    Rng s1 = a.substream(1);
    CHECK(s0.next_u64() != s1.next_u64());
    CHECK(derive_stream(99, 0) == derive_stream(99, 0));
    CHECK(derive_stream(99, 0) != derive_stream(99, 1));
}
