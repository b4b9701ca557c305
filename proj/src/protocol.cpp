#include "otoc/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "otoc/errors.hpp"

namespace otoc {

std::vector<double> TrotterSchedule::cumulative_times() const {
    std::vector<double> times;
    times.reserve(step_durations.size());
    double t = 0.0;
    for (double dt : step_durations) {
        if (!std::isfinite(dt) || dt <= 0.0) {
            throw ArgumentError("schedule steps must be positive, got " + std::to_string(dt));
        }
        t += dt;
        times.push_back(t);
    }
    return times;
}

namespace {

const OtocPoint* find_time(const OtocSeries& series, double t) {
    for (const OtocPoint& p : series.points) {
        if (std::abs(p.t - t) <= 1e-9) return &p;
    }
    return nullptr;
}

} // namespace

const OtocPoint& OtocSeries::at_time(double t) const& {
    if (const OtocPoint* p = find_time(*this, t)) return *p;
    throw ArgumentError("series has no point at t = " + std::to_string(t));
}

OtocPoint OtocSeries::at_time(double t) const&& { return at_time(t); }

Circuit build_trotter_step(const TfimParams& p, double dt) {
    if (p.n_sites < 1) throw ArgumentError("chain needs n_sites >= 1");
    if (!std::isfinite(p.coupling) || !std::isfinite(p.field)) {
        throw ArgumentError("chain couplings must be finite");
    }
    if (!std::isfinite(dt) || dt <= 0.0) {
        throw ArgumentError("step duration must be positive, got " + std::to_string(dt));
    }
    const int n = p.n_sites;
    Circuit step(2 * n);
    for (int i = 0; i + 1 < n; ++i) step.append(GateOp::xx(i, i + 1, 2.0 * p.coupling * dt));
    for (int q = 0; q < n; ++q) step.append(GateOp::rz(q, 2.0 * p.field * dt));
    for (int i = 0; i + 1 < n; ++i) {
        step.append(GateOp::xx(n + i, n + i + 1, -2.0 * p.coupling * dt));
    }
    for (int q = 0; q < n; ++q) step.append(GateOp::rz(n + q, -2.0 * p.field * dt));
    return step;
}

Postselection postselect(const std::vector<std::string>& shots) {
    Postselection out;
    for (const std::string& bits : shots) {
        long ones = 0;
        for (char b : bits) {
            if (b != '0' && b != '1') {
                throw ArgumentError("bitstring characters must be '0' or '1'");
            }
            ones += b == '1' ? 1 : 0;
        }
        if (ones % 2 == 1) out.kept.push_back(bits);
    }
    if (!shots.empty()) {
        out.kept_fraction = static_cast<double>(out.kept.size()) / static_cast<double>(shots.size());
    }
    return out;
}

Circuit pad_to_depth(const Circuit& circuit, const GateCounts& target) {
    const GateCounts current = circuit.counts();
    if (target.one_qubit < current.one_qubit || target.two_qubit < current.two_qubit) {
        throw ArgumentError("pad target is below the circuit's current gate counts");
    }
    long d1 = target.one_qubit - current.one_qubit;
    long d2 = target.two_qubit - current.two_qubit;
    if (d1 > 0 && circuit.n_qubits < 1) throw ArgumentError("one-qubit padding needs a wire");
    if (d2 > 0 && circuit.n_qubits < 2) throw ArgumentError("two-qubit padding needs two wires");

    const int wire1 = circuit.ops.empty() ? 0 : circuit.ops.front().targets[0];
    std::array<int, 2> wire2{0, 1};
    for (const GateOp& op : circuit.ops) {
        if (op.is_two_qubit()) {
            wire2 = op.targets;
            break;
        }
    }

    Circuit out = circuit;
    // A full turn (theta = 4 pi) is exactly the identity, so an odd deficit
    // costs one gate and the rest cancels in inverse pairs.
    if (d2 % 2 == 1) {
        out.append(GateOp::xx(wire2[0], wire2[1], 4.0 * M_PI));
        --d2;
    }
    for (; d2 > 0; d2 -= 2) {
        out.append(GateOp::xx(wire2[0], wire2[1], M_PI_2));
        out.append(GateOp::xx(wire2[0], wire2[1], -M_PI_2));
    }
    if (d1 % 2 == 1) {
        out.append(GateOp::rz(wire1, 4.0 * M_PI));
        --d1;
    }
    for (; d1 > 0; d1 -= 2) {
        out.append(GateOp::rz(wire1, M_PI_2));
        out.append(GateOp::rz(wire1, -M_PI_2));
    }
    return out;
}

namespace {

void validate_experiment(const OtocExperiment& exp) {
    const int n = exp.tfim.n_sites;
    if (exp.w_site < 1 || exp.w_site > n || exp.v_site < 1 || exp.v_site > n) {
        throw ArgumentError("operator sites must lie in 1.." + std::to_string(n));
    }
    if (exp.w_pauli != 'X' && exp.w_pauli != 'Z') {
        throw ArgumentError("perturbation letter must be X or Z (no bare Y in the alphabet)");
    }
    if (exp.v_pauli != 'Z') {
        throw ArgumentError("correlator letter must be Z; shots read the computational basis");
    }
    if (exp.shots < 0) throw ArgumentError("shots must be >= 0");
    if (exp.noise) {
        validate_noise_model(*exp.noise);
        if (exp.evolution == EvolutionMode::EXACT) {
            throw ConfigError("noise emulation needs digitized evolution; EXACT has no gates");
        }
        if (exp.shots < 1) {
            throw ConfigError("noise emulation is per-shot Monte Carlo; set shots >= 1");
        }
    }
    if (exp.pad_depth && exp.evolution == EvolutionMode::EXACT) {
        throw ConfigError("depth padding applies to digitized circuits only");
    }
    if (exp.prep == PrepMode::VARIATIONAL && exp.prep_params &&
        !(exp.prep_params->temperature == exp.temp)) {
        throw ArgumentError("preparation angles are labelled for a different temperature");
    }
}

double z_value(char bit) { return bit == '0' ? 1.0 : -1.0; }

struct ShotStats {
    double mean = 0.0;
    double kept_fraction = 0.0;
    std::optional<double> postselected;
    std::optional<double> std_error;
};

ShotStats shot_statistics(const std::vector<std::string>& shots, int va, int vb) {
    ShotStats stats;
    double sum = 0.0;
    for (const std::string& bits : shots) sum += z_value(bits[va]) * z_value(bits[vb]);
    stats.mean = sum / static_cast<double>(shots.size());

    const Postselection kept = postselect(shots);
    stats.kept_fraction = kept.kept_fraction;
    if (kept.kept.empty()) return stats;

    double kept_sum = 0.0;
    for (const std::string& bits : kept.kept) kept_sum += z_value(bits[va]) * z_value(bits[vb]);
    const double kept_n = static_cast<double>(kept.kept.size());
    const double kept_mean = kept_sum / kept_n;
    double ss = 0.0;
    for (const std::string& bits : kept.kept) {
        const double v = z_value(bits[va]) * z_value(bits[vb]);
        ss += (v - kept_mean) * (v - kept_mean);
    }
    const double variance = kept.kept.size() > 1 ? ss / (kept_n - 1.0) : 0.0;
    stats.postselected = kept_mean;
    stats.std_error = std::sqrt(variance / kept_n);
    return stats;
}

std::string field_name(SeriesField use) {
    switch (use) {
        case SeriesField::O_EXACT: return "o_exact";
        case SeriesField::O_STATE: return "o_state";
        case SeriesField::O_SAMPLED: return "o_sampled";
        case SeriesField::O_POSTSELECTED: return "o_postselected";
    }
    return "?";
}

std::optional<double> series_value(const OtocPoint& p, SeriesField use) {
    switch (use) {
        case SeriesField::O_EXACT: return p.o_exact;
        case SeriesField::O_STATE: return p.o_state;
        case SeriesField::O_SAMPLED: return p.o_sampled;
        case SeriesField::O_POSTSELECTED: return p.o_postselected;
    }
    return std::nullopt;
}

} // namespace

OtocSeries run_experiment(const OtocExperiment& exp) {
    validate_experiment(exp);
    const int n = exp.tfim.n_sites;
    const SpectralDecomposition sd = diagonalize(build_hamiltonian(exp.tfim));
    const std::vector<double> cumulative = exp.schedule.cumulative_times();

    std::vector<double> times{0.0};
    times.insert(times.end(), cumulative.begin(), cumulative.end());

    const int wq = exp.w_site - 1;
    const int va = exp.v_site - 1;
    const int vb = n + exp.v_site - 1;
    const PauliString w_single = PauliString::single(n, wq, exp.w_pauli);
    const PauliString v_single = PauliString::single(n, va, 'Z');
    PauliString v_mirrored(2 * n);
    v_mirrored.set(va, 'Z').set(vb, 'Z');

    // The variational route runs on gates from |0...0>; the exact route
    // starts from the purification itself, so its circuits begin at the
    // perturbation.
    StateVector initial(2 * n);
    std::optional<Circuit> prep_circuit;
    if (exp.prep == PrepMode::VARIATIONAL) {
        const TfdAnsatz ansatz = TfdAnsatz::standard_for_temperature(n, exp.temp);
        TfdParameters params;
        if (exp.prep_params) {
            params = *exp.prep_params;
        } else {
            OptimizerSettings settings;
            settings.seed = derive_stream(exp.seed, 0);
            params = optimize_tfd(ansatz, exp.temp, sd, settings).params;
        }
        prep_circuit = build_tfd_circuit(ansatz, params);
    } else {
        initial = exact_tfd_state(sd, exp.temp);
    }

    const GateOp w_gate =
        exp.w_pauli == 'X' ? GateOp::pauli_x(wq) : GateOp::pauli_z(wq);

    // Cumulative circuits: preparation (variational route), the perturbation,
    // then k digitized steps.
    std::vector<Circuit> circuits;
    if (exp.evolution == EvolutionMode::TROTTER) {
        Circuit growing(2 * n);
        if (prep_circuit) growing.append(*prep_circuit);
        growing.append(w_gate);
        circuits.push_back(growing);
        for (double dt : exp.schedule.step_durations) {
            growing.append(build_trotter_step(exp.tfim, dt));
            circuits.push_back(growing);
        }
        if (exp.pad_depth) {
            const GateCounts target = exp.pad_target ? *exp.pad_target : circuits.back().counts();
            for (Circuit& c : circuits) c = pad_to_depth(c, target);
        }
    }

    OtocSeries series;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];

        StateVector state = initial;
        if (exp.evolution == EvolutionMode::TROTTER) {
            apply_circuit(state, circuits[k]);
        } else {
            if (prep_circuit) apply_circuit(state, *prep_circuit);
            apply_pauli(state, wq, exp.w_pauli);
            if (t > 0.0) state = exact_two_copy_evolve(state, sd, t);
        }

        OtocPoint point;
        point.t = t;
        point.o_exact = exact_otoc(sd, exp.temp, t, w_single, v_single);
        point.o_state = expectation_pauli(state, v_mirrored);

        if (exp.shots > 0) {
            Rng time_rng(derive_stream(exp.seed, k + 1));
            std::vector<std::string> shots;
            shots.reserve(static_cast<std::size_t>(exp.shots));
            if (exp.noise) {
                for (long j = 0; j < exp.shots; ++j) {
                    Rng shot_rng = time_rng.substream(static_cast<std::uint64_t>(j));
                    StateVector trajectory = initial;
                    apply_noisy_circuit(trajectory, circuits[k], *exp.noise, shot_rng);
                    const std::string bits = sample_bitstrings(trajectory, 1, shot_rng)[0];
                    shots.push_back(apply_readout_noise(bits, exp.noise->p_readout, shot_rng));
                }
            } else {
                shots = sample_bitstrings(state, exp.shots, time_rng);
            }
            const ShotStats stats = shot_statistics(shots, va, vb);
            point.o_sampled = stats.mean;
            point.kept_fraction = stats.kept_fraction;
            point.o_postselected = stats.postselected;
            point.std_error = stats.std_error;
        }

        series.points.push_back(std::move(point));
    }
    return series;
}

DecayRate decay_rate(const OtocSeries& series, SeriesField use) {
    DecayRate rate;
    const OtocPoint& early = series.at_time(rate.t_early);
    const OtocPoint& late = series.at_time(rate.t_late);
    const std::optional<double> at_early = series_value(early, use);
    const std::optional<double> at_late = series_value(late, use);
    if (!at_early || !at_late) {
        throw ArgumentError("series has no " + field_name(use) +
                            " at the finite-difference times");
    }
    rate.lambda = (*at_late - *at_early) / (rate.t_late - rate.t_early);
    return rate;
}

namespace {

// Gate counts of the deepest circuit an experiment will run at `temp`; the
// shared padding target of a sweep is the elementwise maximum of these.
GateCounts deepest_counts(const OtocExperiment& base, const Temperature& temp) {
    const int n = base.tfim.n_sites;
    Circuit c(2 * n);
    if (base.prep == PrepMode::VARIATIONAL) {
        const TfdAnsatz ansatz = TfdAnsatz::standard_for_temperature(n, temp);
        const std::vector<double> zeros(static_cast<std::size_t>(ansatz.n_params()), 0.0);
        c.append(build_tfd_circuit(ansatz, {zeros, temp}));
    }
    c.append(base.w_pauli == 'X' ? GateOp::pauli_x(base.w_site - 1)
                                 : GateOp::pauli_z(base.w_site - 1));
    for (double dt : base.schedule.step_durations) c.append(build_trotter_step(base.tfim, dt));
    return c.counts();
}

std::optional<DecayRate> maybe_decay_rate(const OtocSeries& series, SeriesField use) {
    const OtocPoint* early = find_time(series, DecayRate{}.t_early);
    const OtocPoint* late = find_time(series, DecayRate{}.t_late);
    if (!early || !late) return std::nullopt;
    if (!series_value(*early, use) || !series_value(*late, use)) return std::nullopt;
    return decay_rate(series, use);
}

} // namespace

std::map<Temperature, SweepEntry> temperature_sweep(const OtocExperiment& base,
                                                    const std::vector<Temperature>& temps,
                                                    int jobs) {
    if (jobs < 1) throw ArgumentError("jobs must be >= 1");
    std::map<Temperature, SweepEntry> out;
    if (temps.empty()) return out;

    std::optional<GateCounts> shared_target = base.pad_target;
    if (base.pad_depth && !shared_target && base.evolution == EvolutionMode::TROTTER) {
        GateCounts deepest;
        for (const Temperature& temp : temps) {
            const GateCounts c = deepest_counts(base, temp);
            deepest.one_qubit = std::max(deepest.one_qubit, c.one_qubit);
            deepest.two_qubit = std::max(deepest.two_qubit, c.two_qubit);
        }
        shared_target = deepest;
    }

    std::vector<SweepEntry> entries(temps.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= temps.size()) return;
            try {
                OtocExperiment job = base;
                job.temp = temps[i];
                job.seed = derive_stream(base.seed, i);
                job.prep_params.reset();
                job.pad_target = shared_target;
                SweepEntry entry;
                entry.series = run_experiment(job);
                entry.lambda_exact = maybe_decay_rate(entry.series, SeriesField::O_EXACT);
                entry.lambda_state = maybe_decay_rate(entry.series, SeriesField::O_STATE);
                entry.lambda_sampled = maybe_decay_rate(entry.series, SeriesField::O_SAMPLED);
                entry.lambda_postselected =
                    maybe_decay_rate(entry.series, SeriesField::O_POSTSELECTED);
                entries[i] = std::move(entry);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    const int n_threads = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(jobs), temps.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 0; i < temps.size(); ++i) out[temps[i]] = std::move(entries[i]);
    return out;
}

} // namespace otoc
