#pragma once

#include <compare>
#include <complex>
#include <string>
#include <vector>

#include "otoc/statevector.hpp"

namespace otoc {

// Transverse-field Ising chain, open boundaries:
//   H = J sum_{i=1}^{N-1} X_i X_{i+1} + g sum_{i=1}^{N} Z_i
struct TfimParams {
    int n_sites = 3;
    double coupling = 1.0; // J
    double field = 1.0;    // g
};

inline constexpr int kMaxDenseSites = 13; // dense 2^N x 2^N guard

class DenseOperator {
public:
    explicit DenseOperator(int dim) : dim_(dim), m_(static_cast<std::size_t>(dim) * dim) {}

    int dim() const { return dim_; }
    cdouble& at(int r, int c) { return m_[static_cast<std::size_t>(r) * dim_ + c]; }
    const cdouble& at(int r, int c) const { return m_[static_cast<std::size_t>(r) * dim_ + c]; }

    double max_hermiticity_defect() const; // max |M - M^dagger|
    bool is_real_symmetric(double tol) const;

private:
    int dim_;
    std::vector<cdouble> m_; // row-major
};

// Eigenvalues ascending; eigenvectors real orthonormal, column n is |n>.
// H real symmetric makes real eigenvectors valid, which realizes |n*> = |n>.
struct SpectralDecomposition {
    int dim = 0;
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors; // row-major dim x dim

    double vec(int row, int col) const {
        return eigenvectors[static_cast<std::size_t>(row) * dim + col];
    }
    int n_sites() const; // log2(dim)
};

// Dimensionless temperature k_B T / J with distinguished ZERO and INFINITE values.
class Temperature {
public:
    static Temperature zero() { return Temperature(Kind::Zero, 0.0); }
    static Temperature infinite() { return Temperature(Kind::Infinite, 0.0); }
    static Temperature finite(double value); // value > 0
    static Temperature of(double value);     // 0 -> zero, inf -> infinite
    static Temperature parse(const std::string& text);

    bool is_zero() const { return kind_ == Kind::Zero; }
    bool is_infinite() const { return kind_ == Kind::Infinite; }
    bool is_finite() const { return kind_ == Kind::Finite; }

    double value() const; // finite only
    double beta() const;  // 1/T for finite, 0 for infinite; throws for zero

    std::string label() const; // "0", "0.5", "inf", ...

    friend bool operator==(const Temperature& a, const Temperature& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
    }
    friend bool operator<(const Temperature& a, const Temperature& b) {
        if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
        return a.kind_ == Kind::Finite && a.value_ < b.value_;
    }

private:
    enum class Kind { Zero = 0, Finite = 1, Infinite = 2 };
    Temperature(Kind k, double v) : kind_(k), value_(v) {}
    Kind kind_;
    double value_;
};

DenseOperator build_hamiltonian(const TfimParams& p);

// Contract: residual ||H v_n - E_n v_n|| <= 1e-9 * max(1, |E_n|), eigenvector
// matrix real orthogonal within 1e-9. Input must be real symmetric within 1e-12.
SpectralDecomposition diagonalize(const DenseOperator& h);

// Square-root thermal weights s_n = e^{-beta (E_n - E_0) / 2}; zero temperature
// selects the (required unique) ground state.
std::vector<double> thermal_weights(const std::vector<double>& eigenvalues, Temperature temp);

// Purified thermal state on 2N qubits: copy A on qubits 0..N-1, copy B on N..2N-1.
StateVector exact_tfd_state(const SpectralDecomposition& sd, Temperature temp);

// Thermal out-of-time-ordered correlator
//   O(t) = (1/Z) Tr( e^{-bH/2} W^dag V^dag(t) W e^{-bH/2} V(t) ),
// with V(t) = e^{iHt} V e^{-iHt}, evaluated in the eigenbasis.
double exact_otoc(const SpectralDecomposition& sd, Temperature temp, double t,
                  const PauliString& w, const PauliString& v);

// Applies e^{-iHt} on copy A and e^{+iHt} on copy B of a 2N-qubit state.
StateVector exact_two_copy_evolve(const StateVector& state, const SpectralDecomposition& sd,
                                  double t);

// Full 2^n x 2^n unitary of a gate (dense oracle for the kernels). n_qubits <= 6.
DenseOperator gate_matrix(const GateOp& op, int n_qubits);

// Dense matrix of a Pauli word.
DenseOperator pauli_matrix(const PauliString& p);

} // namespace otoc
