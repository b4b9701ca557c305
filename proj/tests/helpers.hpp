#pragma once

// Test-side numerics, deliberately independent of the library's linear algebra:
// naive matvec, Taylor exponential, and a small cyclic Jacobi eigensolver. These
// are the second route in every dual-route check.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "otoc/rng.hpp"
#include "otoc/spinchain.hpp"
#include "otoc/statevector.hpp"

namespace testutil {

using otoc::cdouble;
using otoc::DenseOperator;

inline DenseOperator identity(int dim) {
    DenseOperator m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

inline DenseOperator matmul(const DenseOperator& a, const DenseOperator& b) {
    const int dim = a.dim();
    DenseOperator out(dim);
    for (int r = 0; r < dim; ++r) {
        for (int k = 0; k < dim; ++k) {
            const cdouble ark = a.at(r, k);
            if (ark == cdouble{0.0, 0.0}) continue;
            for (int c = 0; c < dim; ++c) out.at(r, c) += ark * b.at(k, c);
        }
    }
    return out;
}

inline DenseOperator dagger(const DenseOperator& a) {
    DenseOperator out(a.dim());
    for (int r = 0; r < a.dim(); ++r) {
        for (int c = 0; c < a.dim(); ++c) out.at(r, c) = std::conj(a.at(c, r));
    }
    return out;
}

inline double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
    double worst = 0.0;
    for (int r = 0; r < a.dim(); ++r) {
        for (int c = 0; c < a.dim(); ++c) {
            worst = std::max(worst, std::abs(a.at(r, c) - b.at(r, c)));
        }
    }
    return worst;
}

inline cdouble trace(const DenseOperator& a) {
    cdouble t{0.0, 0.0};
    for (int i = 0; i < a.dim(); ++i) t += a.at(i, i);
    return t;
}

// Standard Kronecker product: index = i_a * dim(b) + i_b. With the library's
// little-endian layout, kron(I, H) acts as H on the low-bit (copy A) factor.
inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
    const int da = a.dim();
    const int db = b.dim();
    DenseOperator out(da * db);
    for (int ra = 0; ra < da; ++ra) {
        for (int ca = 0; ca < da; ++ca) {
            const cdouble v = a.at(ra, ca);
            if (v == cdouble{0.0, 0.0}) continue;
            for (int rb = 0; rb < db; ++rb) {
                for (int cb = 0; cb < db; ++cb) {
                    out.at(ra * db + rb, ca * db + cb) = v * b.at(rb, cb);
                }
            }
        }
    }
    return out;
}

// e^{scale * A} by scaling-and-squaring on a plain Taylor series. The scale may
// be complex (e.g. -i t for time evolution, -beta for thermal states).
inline DenseOperator expm(const DenseOperator& a, cdouble scale) {
    const int dim = a.dim();
    double norm = 0.0;
    for (int c = 0; c < dim; ++c) {
        double col = 0.0;
        for (int r = 0; r < dim; ++r) col += std::abs(a.at(r, c)) * std::abs(scale);
        norm = std::max(norm, col);
    }
    int squarings = 0;
    cdouble s = scale;
    while (norm > 0.5) {
        norm /= 2.0;
        s /= 2.0;
        ++squarings;
    }
    DenseOperator result = identity(dim);
    DenseOperator term = identity(dim);
    for (int k = 1; k <= 40; ++k) {
        DenseOperator next(dim);
        for (int r = 0; r < dim; ++r) {
            for (int kk = 0; kk < dim; ++kk) {
                const cdouble t = term.at(r, kk) * (s / static_cast<double>(k));
                if (t == cdouble{0.0, 0.0}) continue;
                for (int c = 0; c < dim; ++c) next.at(r, c) += t * a.at(kk, c);
            }
        }
        term = next;
        double tn = 0.0;
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) tn = std::max(tn, std::abs(term.at(r, c)));
        }
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) result.at(r, c) += term.at(r, c);
        }
        if (tn < 1e-18) break;
    }
    for (int i = 0; i < squarings; ++i) result = matmul(result, result);
    return result;
}

// Naive matrix-vector product; the oracle route when checking gate kernels.
inline void apply_dense(const DenseOperator& m, otoc::StateVector& s) {
    const int dim = static_cast<int>(s.dim());
    std::vector<cdouble> out(dim, cdouble{0.0, 0.0});
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) out[r] += m.at(r, c) * s.amp(c);
    }
    for (int r = 0; r < dim; ++r) s.amp(r) = out[r];
}

inline cdouble dense_expectation(const otoc::StateVector& s, const DenseOperator& m) {
    otoc::StateVector copy = s;
    apply_dense(m, copy);
    return inner_product(s, copy);
}

// Reduced state of copy A (low n bits) from a two-copy pure state.
inline DenseOperator reduced_state_a(const otoc::StateVector& psi, int n_sites) {
    const int dim = 1 << n_sites;
    DenseOperator rho(dim);
    for (int b = 0; b < dim; ++b) {
        for (int a = 0; a < dim; ++a) {
            for (int ap = 0; ap < dim; ++ap) {
                rho.at(a, ap) += psi.amp(static_cast<std::uint64_t>(a) | (static_cast<std::uint64_t>(b) << n_sites)) *
                                 std::conj(psi.amp(static_cast<std::uint64_t>(ap) | (static_cast<std::uint64_t>(b) << n_sites)));
            }
        }
    }
    return rho;
}

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> m, int dim) {
    const auto at = [&](int r, int c) -> double& { return m[r * dim + c]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < dim; ++p) {
            for (int q = p + 1; q < dim; ++q) off += at(p, q) * at(p, q);
        }
        if (off < 1e-26) break;
        for (int p = 0; p < dim; ++p) {
            for (int q = p + 1; q < dim; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < dim; ++k) {
                    const double mkp = at(k, p);
                    const double mkq = at(k, q);
                    at(k, p) = c * mkp - s * mkq;
                    at(k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < dim; ++k) {
                    const double mpk = at(p, k);
                    const double mqk = at(q, k);
                    at(p, k) = c * mpk - s * mqk;
                    at(q, k) = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> eigs(dim);
    for (int i = 0; i < dim; ++i) eigs[i] = at(i, i);
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

// Eigenvalues of a complex Hermitian matrix via the real symmetric embedding
// [[Re, -Im], [Im, Re]], which carries each eigenvalue twice.
inline std::vector<double> hermitian_eigenvalues(const DenseOperator& a) {
    const int dim = a.dim();
    std::vector<double> embed(static_cast<std::size_t>(2 * dim) * (2 * dim), 0.0);
    const auto put = [&](int r, int c, double v) { embed[r * 2 * dim + c] = v; };
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            put(r, c, a.at(r, c).real());
            put(r + dim, c + dim, a.at(r, c).real());
            put(r, c + dim, -a.at(r, c).imag());
            put(r + dim, c, a.at(r, c).imag());
        }
    }
    std::vector<double> doubled = jacobi_eigenvalues(std::move(embed), 2 * dim);
    std::vector<double> eigs(dim);
    for (int i = 0; i < dim; ++i) eigs[i] = doubled[2 * i]; // pairs are adjacent when sorted
    return eigs;
}

inline double trace_distance(const DenseOperator& a, const DenseOperator& b) {
    DenseOperator diff(a.dim());
    for (int r = 0; r < a.dim(); ++r) {
        for (int c = 0; c < a.dim(); ++c) diff.at(r, c) = a.at(r, c) - b.at(r, c);
    }
    double sum = 0.0;
    for (double e : hermitian_eigenvalues(diff)) sum += std::abs(e);
    return 0.5 * sum;
}

inline otoc::StateVector random_state(int n_qubits, otoc::Rng& rng) {
    otoc::StateVector s(n_qubits);
    for (std::uint64_t b = 0; b < s.dim(); ++b) {
        const double u1 = 1.0 - rng.next_double();
        const double u2 = rng.next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        s.amp(b) = cdouble{r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
    }
    const double norm = std::sqrt(s.norm_sq());
    for (std::uint64_t b = 0; b < s.dim(); ++b) s.amp(b) /= norm;
    return s;
}

} // namespace testutil
