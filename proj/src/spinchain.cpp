#include "otoc/spinchain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace otoc {

namespace {

constexpr cdouble kImag{0.0, 1.0};

using ComplexMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RealMatrix eigenvector_matrix(const SpectralDecomposition& sd) {
    return Eigen::Map<const RealMatrix>(sd.eigenvectors.data(), sd.dim, sd.dim);
}

int required_sites(const StateVector& state, const SpectralDecomposition& sd) {
    const int n = sd.n_sites();
    if (state.n_qubits() != 2 * n) {
        throw ArgumentError("two-copy state needs " + std::to_string(2 * n) +
                            " qubits, got " + std::to_string(state.n_qubits()));
    }
    return n;
}

} // namespace

double DenseOperator::max_hermiticity_defect() const {
    double worst = 0.0;
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) {
            worst = std::max(worst, std::abs(at(r, c) - std::conj(at(c, r))));
        }
    }
    return worst;
}

bool DenseOperator::is_real_symmetric(double tol) const {
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) {
            if (std::abs(at(r, c).imag()) > tol) return false;
            if (std::abs(at(r, c).real() - at(c, r).real()) > tol) return false;
        }
    }
    return true;
}

int SpectralDecomposition::n_sites() const {
    return std::countr_zero(static_cast<unsigned>(dim));
}

Temperature Temperature::finite(double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ArgumentError("finite temperature must be > 0, got " + std::to_string(value));
    }
    return Temperature(Kind::Finite, value);
}

Temperature Temperature::of(double value) {
    if (std::isinf(value) && value > 0) return infinite();
    if (value == 0.0) return zero();
    return finite(value);
}

Temperature Temperature::parse(const std::string& text) {
    std::string lower;
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "inf" || lower == "infinity" || lower == "infinite") return infinite();
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(lower, &pos);
    } catch (const std::exception&) {
        throw ArgumentError("cannot parse temperature '" + text + "'");
    }
    if (pos != lower.size()) throw ArgumentError("cannot parse temperature '" + text + "'");
    if (v < 0.0) throw ArgumentError("temperature must be nonnegative, got " + text);
    return of(v);
}

double Temperature::value() const {
    if (!is_finite()) throw ArgumentError("value() requires a finite temperature");
    return value_;
}

double Temperature::beta() const {
    if (is_zero()) throw ArgumentError("beta is unbounded at zero temperature");
    return is_infinite() ? 0.0 : 1.0 / value_;
}

std::string Temperature::label() const {
    if (is_zero()) return "0";
    if (is_infinite()) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", value_);
    return buf;
}

DenseOperator build_hamiltonian(const TfimParams& p) {
    if (p.n_sites < 1) {
        throw ArgumentError("n_sites must be >= 1, got " + std::to_string(p.n_sites));
    }
    if (p.n_sites > kMaxDenseSites) {
        throw CapacityError("dense Hamiltonian limited to " + std::to_string(kMaxDenseSites) +
                            " sites, got " + std::to_string(p.n_sites));
    }
    if (!std::isfinite(p.coupling) || !std::isfinite(p.field)) {
        throw ArgumentError("J and g must be finite");
    }
    const int n = p.n_sites;
    const int dim = 1 << n;
    DenseOperator h(dim);
    for (int b = 0; b < dim; ++b) {
        double diag = 0.0;
        for (int q = 0; q < n; ++q) diag += (b & (1 << q)) ? -1.0 : 1.0; // Z|0> = +|0>
        h.at(b, b) += p.field * diag;
        for (int q = 0; q + 1 < n; ++q) {
            const int partner = b ^ (1 << q) ^ (1 << (q + 1));
            h.at(partner, b) += p.coupling;
        }
    }
    return h;
}

SpectralDecomposition diagonalize(const DenseOperator& h) {
    if (!h.is_real_symmetric(1e-12)) {
        throw ArgumentError("diagonalize requires a real symmetric matrix (tolerance 1e-12)");
    }
    const int dim = h.dim();
    RealMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) m(r, c) = h.at(r, c).real();
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed to converge");
    }

    SpectralDecomposition sd;
    sd.dim = dim;
    sd.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
    sd.eigenvectors.resize(static_cast<std::size_t>(dim) * dim);
    Eigen::Map<RealMatrix>(sd.eigenvectors.data(), dim, dim) = solver.eigenvectors();

    // Contract checks: per-vector residual and global orthogonality.
    const RealMatrix& vecs = solver.eigenvectors();
    for (int n = 0; n < dim; ++n) {
        const double en = sd.eigenvalues[n];
        const double residual = (m * vecs.col(n) - en * vecs.col(n)).norm();
        if (residual > 1e-9 * std::max(1.0, std::abs(en))) {
            throw NumericalError("eigenpair " + std::to_string(n) + " residual " +
                                 std::to_string(residual) + " exceeds contract");
        }
    }
    const double ortho = (vecs.transpose() * vecs - RealMatrix::Identity(dim, dim))
                             .cwiseAbs()
                             .maxCoeff();
    if (ortho > 1e-9) {
        throw NumericalError("eigenvector matrix orthogonality defect " + std::to_string(ortho));
    }
    return sd;
}

std::vector<double> thermal_weights(const std::vector<double>& eigenvalues, Temperature temp) {
    if (eigenvalues.empty()) throw ArgumentError("empty spectrum");
    std::vector<double> w(eigenvalues.size(), 0.0);
    if (temp.is_infinite()) {
        std::fill(w.begin(), w.end(), 1.0);
        return w;
    }
    if (temp.is_zero()) {
        if (eigenvalues.size() > 1 && eigenvalues[1] - eigenvalues[0] <= 1e-9) {
            throw DegeneracyError("ground state is degenerate (gap " +
                                  std::to_string(eigenvalues[1] - eigenvalues[0]) +
                                  "); zero-temperature state is ambiguous");
        }
        w[0] = 1.0;
        return w;
    }
    // Shift by E_0 so the largest weight is exactly 1 (no overflow at large beta).
    const double beta = temp.beta();
    const double e0 = eigenvalues[0];
    for (std::size_t n = 0; n < eigenvalues.size(); ++n) {
        w[n] = std::exp(-beta * (eigenvalues[n] - e0) / 2.0);
    }
    return w;
}

StateVector exact_tfd_state(const SpectralDecomposition& sd, Temperature temp) {
    const int n = sd.n_sites();
    const int dim = sd.dim;
    const std::vector<double> w = thermal_weights(sd.eigenvalues, temp);
    double z = 0.0;
    for (double x : w) z += x * x;
    const double inv_norm = 1.0 / std::sqrt(z);

    // amplitude(a, b) = (1/sqrt(Z)) sum_n w_n <a|n> <b|n>, i.e. V diag(w) V^T.
    const RealMatrix vecs = eigenvector_matrix(sd);
    const RealMatrix m =
        vecs * Eigen::VectorXd::Map(w.data(), dim).asDiagonal() * vecs.transpose();

    StateVector state(2 * n);
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            state.amp(static_cast<std::uint64_t>(a) |
                      (static_cast<std::uint64_t>(b) << n)) = m(a, b) * inv_norm;
        }
    }
    return state;
}

double exact_otoc(const SpectralDecomposition& sd, Temperature temp, double t,
                  const PauliString& w, const PauliString& v) {
    const int n = sd.n_sites();
    if (w.size() != n || v.size() != n) {
        throw ArgumentError("W and V must act on " + std::to_string(n) + " sites");
    }
    const int dim = sd.dim;
    const RealMatrix vecs = eigenvector_matrix(sd);

    const auto to_eigenbasis = [&](const PauliString& p) {
        const DenseOperator dense = pauli_matrix(p);
        ComplexMatrix m(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) m(r, c) = dense.at(r, c);
        }
        return ComplexMatrix(vecs.transpose().cast<cdouble>() * m * vecs.cast<cdouble>());
    };
    const ComplexMatrix wm = to_eigenbasis(w);
    const ComplexMatrix vm = to_eigenbasis(v);

    // V(t) = e^{iHt} V e^{-iHt} is diagonal phase conjugation in the eigenbasis.
    Eigen::VectorXcd phase(dim);
    for (int k = 0; k < dim; ++k) phase(k) = std::exp(kImag * sd.eigenvalues[k] * t);
    const ComplexMatrix vt = phase.asDiagonal() * vm * phase.conjugate().asDiagonal();

    const std::vector<double> s = thermal_weights(sd.eigenvalues, temp);
    double z = 0.0;
    for (double x : s) z += x * x;
    const Eigen::VectorXd sv = Eigen::VectorXd::Map(s.data(), dim);

    const ComplexMatrix product = sv.asDiagonal().toDenseMatrix().cast<cdouble>() *
                                  wm.adjoint() * vt.adjoint() * wm *
                                  sv.asDiagonal().toDenseMatrix().cast<cdouble>() * vt;
    const cdouble o = product.trace() / z;
    if (std::abs(o.imag()) > 1e-9) {
        throw ConsistencyError("OTOC imaginary residual " + std::to_string(o.imag()));
    }
    return o.real();
}

StateVector exact_two_copy_evolve(const StateVector& state, const SpectralDecomposition& sd,
                                  double t) {
    const int n = required_sites(state, sd);
    const int dim = sd.dim;
    const RealMatrix vecs = eigenvector_matrix(sd);

    ComplexMatrix m(dim, dim);
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            m(a, b) = state.amp(static_cast<std::uint64_t>(a) |
                                (static_cast<std::uint64_t>(b) << n));
        }
    }

    // e^{-iH t} (x) e^{+iH t} acting on M is V D(-t) [V^T M V] D(+t) V^T.
    ComplexMatrix k = vecs.transpose().cast<cdouble>() * m * vecs.cast<cdouble>();
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            k(r, c) *= std::exp(-kImag * (sd.eigenvalues[r] - sd.eigenvalues[c]) * t);
        }
    }
    m = vecs.cast<cdouble>() * k * vecs.transpose().cast<cdouble>();

    StateVector out(state.n_qubits());
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            out.amp(static_cast<std::uint64_t>(a) |
                    (static_cast<std::uint64_t>(b) << n)) = m(a, b);
        }
    }
    return out;
}

DenseOperator gate_matrix(const GateOp& op, int n_qubits) {
    if (n_qubits > 6) {
        throw CapacityError("gate_matrix limited to 6 qubits, got " + std::to_string(n_qubits));
    }
    if (n_qubits < 1) throw ArgumentError("gate_matrix needs n_qubits >= 1");
    for (int i = 0; i < op.arity(); ++i) {
        if (op.targets[i] < 0 || op.targets[i] >= n_qubits) {
            throw ArgumentError("gate target out of range");
        }
    }
    if (op.arity() == 2 && op.targets[0] == op.targets[1]) {
        throw ArgumentError("gate targets must be distinct");
    }

    const double c = std::cos(op.angle / 2.0);
    const cdouble ms = -kImag * std::sin(op.angle / 2.0);
    const cdouble p0 = std::exp(-kImag * (op.angle / 2.0));
    const cdouble p1 = std::exp(kImag * (op.angle / 2.0));

    // Small matrix on the target subspace; index bit 0 = targets[0], bit 1 = targets[1].
    const int sdim = 1 << op.arity();
    std::vector<cdouble> small(static_cast<std::size_t>(sdim) * sdim, cdouble{0.0, 0.0});
    const auto sm = [&](int r, int cc) -> cdouble& { return small[r * sdim + cc]; };
    switch (op.kind) {
        case GateKind::RZ: sm(0, 0) = p0; sm(1, 1) = p1; break;
        case GateKind::RX: sm(0, 0) = c; sm(1, 1) = c; sm(0, 1) = ms; sm(1, 0) = ms; break;
        case GateKind::PauliX: sm(0, 1) = 1.0; sm(1, 0) = 1.0; break;
        case GateKind::PauliZ: sm(0, 0) = 1.0; sm(1, 1) = -1.0; break;
        case GateKind::XX:
            for (int s = 0; s < 4; ++s) {
                sm(s, s) = c;
                sm(s ^ 3, s) = ms;
            }
            break;
        case GateKind::ZZ:
            for (int s = 0; s < 4; ++s) {
                const bool same = (s == 0 || s == 3);
                sm(s, s) = same ? p0 : p1;
            }
            break;
    }

    const int dim = 1 << n_qubits;
    DenseOperator full(dim);
    for (int col = 0; col < dim; ++col) {
        int scol = (col >> op.targets[0]) & 1;
        if (op.arity() == 2) scol |= ((col >> op.targets[1]) & 1) << 1;
        for (int srow = 0; srow < sdim; ++srow) {
            int row = col;
            row = (row & ~(1 << op.targets[0])) | ((srow & 1) << op.targets[0]);
            if (op.arity() == 2) {
                row = (row & ~(1 << op.targets[1])) | (((srow >> 1) & 1) << op.targets[1]);
            }
            full.at(row, col) += sm(srow, scol);
        }
    }
    return full;
}

DenseOperator pauli_matrix(const PauliString& p) {
    const int n = p.size();
    if (n > kMaxDenseSites) {
        throw CapacityError("pauli_matrix limited to " + std::to_string(kMaxDenseSites) +
                            " qubits, got " + std::to_string(n));
    }
    const int dim = 1 << n;
    DenseOperator m(dim);
    int xmask = 0;
    for (int q = 0; q < n; ++q) {
        if (p.letter(q) == 'X' || p.letter(q) == 'Y') xmask |= 1 << q;
    }
    for (int col = 0; col < dim; ++col) {
        cdouble phase{1.0, 0.0};
        for (int q = 0; q < n; ++q) {
            const bool bit = (col >> q) & 1;
            switch (p.letter(q)) {
                case 'Z': phase *= bit ? -1.0 : 1.0; break;
                case 'Y': phase *= bit ? -kImag : kImag; break;
                default: break;
            }
        }
        m.at(col ^ xmask, col) = phase;
    }
    return m;
}

} // namespace otoc
