#include "otoc/commands.hpp"

#include <filesystem>
#include <iostream>
#include <map>

#include "otoc/errors.hpp"
#include "otoc/output.hpp"
#include "otoc/rng.hpp"
#include "otoc/tfd.hpp"

namespace otoc {

namespace {

namespace fs = std::filesystem;

fs::path out_path(const RunConfig& cfg, const std::string& name) {
    return fs::path(cfg.out_dir) / name;
}

// Config echo first, so the manifest itself re-parses as a config.
void write_manifest(const RunConfig& cfg, const std::string& command) {
    std::string text = "# manifest for `" + command + "` (version " + kVersion + ")\n";
    text += "# re-run: otoc " + command + " --config <this file>\n\n";
    text += serialize_config(cfg);
    write_text_file(out_path(cfg, "manifest.txt"), text);
}

std::vector<double> series_times(const RunConfig& cfg) {
    std::vector<double> times{0.0};
    for (double t : cfg.schedule.cumulative_times()) times.push_back(t);
    return times;
}

// One two-column block per (temperature, curve) pair, each in its own file,
// so any plotting tool can overlay them without parsing CSV.
void write_series_plots(const RunConfig& cfg,
                        const std::map<Temperature, SweepEntry>& sweep) {
    struct CurveColumn {
        const char* name;
        std::optional<double> (*pick)(const OtocPoint&);
    };
    const CurveColumn curves[] = {
        {"exact", [](const OtocPoint& p) { return std::optional<double>(p.o_exact); }},
        {"state", [](const OtocPoint& p) { return std::optional<double>(p.o_state); }},
        {"sampled", [](const OtocPoint& p) { return p.o_sampled; }},
        {"postselected", [](const OtocPoint& p) { return p.o_postselected; }},
    };
    for (const auto& [temp, entry] : sweep) {
        for (const CurveColumn& curve : curves) {
            std::string text = std::string("# t O_") + curve.name + " (T = " + temp.label() +
                               ")\n";
            long rows = 0;
            for (const OtocPoint& p : entry.series.points) {
                const std::optional<double> y = curve.pick(p);
                if (!y) continue;
                text += format_number(p.t) + " " + format_number(*y) + "\n";
                ++rows;
            }
            if (rows == 0) continue;
            write_text_file(
                out_path(cfg, std::string("otoc_") + curve.name + "_T" + temp.label() + ".dat"),
                text);
        }
    }
}

std::optional<double> lambda_of(const std::optional<DecayRate>& r) {
    if (!r) return std::nullopt;
    return r->lambda;
}

} // namespace

void cmd_oracle(const RunConfig& cfg) {
    const SpectralDecomposition sd = diagonalize(build_hamiltonian(cfg.model));
    const PauliString w = PauliString::single(cfg.model.n_sites, cfg.w_site - 1, 'X');
    const PauliString v = PauliString::single(cfg.model.n_sites, cfg.v_site - 1, 'Z');
    const std::vector<double> times = series_times(cfg);

    std::string csv = "temperature,t,O_exact\n";
    for (const Temperature& temp : cfg.temperatures) {
        std::string dat = "# t O_exact (T = " + temp.label() + ")\n";
        for (double t : times) {
            const std::string value = format_number(exact_otoc(sd, temp, t, w, v));
            csv += temp.label() + "," + format_number(t) + "," + value + "\n";
            dat += format_number(t) + " " + value + "\n";
        }
        if (cfg.formats.dat) {
            write_text_file(out_path(cfg, "otoc_exact_T" + temp.label() + ".dat"), dat);
        }
    }
    if (cfg.formats.csv) write_text_file(out_path(cfg, "oracle.csv"), csv);
    write_manifest(cfg, "oracle");
}

void cmd_tfd_optimize(const RunConfig& cfg) {
    const SpectralDecomposition sd = diagonalize(build_hamiltonian(cfg.model));

    std::string csv = "temperature,theta1,theta2,theta3,theta4,fidelity\n";
    for (std::size_t i = 0; i < cfg.temperatures.size(); ++i) {
        const Temperature& temp = cfg.temperatures[i];
        const TfdAnsatz ansatz = TfdAnsatz::standard_for_temperature(cfg.model.n_sites, temp);
        OptimizerSettings settings = cfg.optimizer;
        settings.seed = derive_stream(cfg.seed, i);
        const TfdOptimum best = optimize_tfd(ansatz, temp, sd, settings);

        csv += temp.label();
        for (int slot = 0; slot < 4; ++slot) {
            csv += ",";
            if (slot < static_cast<int>(best.params.thetas.size())) {
                csv += format_number(best.params.thetas[slot]);
            }
        }
        csv += "," + format_number(best.fidelity) + "\n";
        if (best.fidelity < 0.97) {
            std::cerr << "warning: preparation fidelity " << format_number(best.fidelity)
                      << " at temperature " << temp.label() << " is below the 0.97 target\n";
        }
    }
    if (cfg.formats.csv) write_text_file(out_path(cfg, "tfd_params.csv"), csv);
    write_manifest(cfg, "tfd-optimize");
}

void cmd_run(const RunConfig& cfg, int jobs) {
    const auto sweep = temperature_sweep(experiment_from(cfg), cfg.temperatures, jobs);

    std::string csv =
        "temperature,t,O_exact,O_state,O_sampled,O_postselected,kept_fraction,std_error\n";
    for (const auto& [temp, entry] : sweep) {
        for (const OtocPoint& p : entry.series.points) {
            csv += temp.label() + "," + format_number(p.t) + "," + format_number(p.o_exact) +
                   "," + format_number(p.o_state) + "," + csv_cell(p.o_sampled) + "," +
                   csv_cell(p.o_postselected) + "," + csv_cell(p.kept_fraction) + "," +
                   csv_cell(p.std_error) + "\n";
            if (p.kept_fraction && *p.kept_fraction == 0.0) {
                std::cerr << "warning: postselection kept no shots at temperature "
                          << temp.label() << ", t = " << format_number(p.t) << "\n";
            }
        }
    }
    if (cfg.formats.csv) write_text_file(out_path(cfg, "otoc.csv"), csv);
    if (cfg.formats.dat) write_series_plots(cfg, sweep);
    write_manifest(cfg, "run");
}

void cmd_sweep(const RunConfig& cfg, int jobs) {
    const auto sweep = temperature_sweep(experiment_from(cfg), cfg.temperatures, jobs);

    std::string csv = "temperature,lambda_exact,lambda_state,lambda_sampled,lambda_postselected\n";
    struct LambdaColumn {
        const char* name;
        std::optional<double> value;
    };
    std::map<std::string, std::string> lambda_plots; // curve name -> file body
    for (const auto& [temp, entry] : sweep) {
        const LambdaColumn columns[] = {
            {"exact", lambda_of(entry.lambda_exact)},
            {"state", lambda_of(entry.lambda_state)},
            {"sampled", lambda_of(entry.lambda_sampled)},
            {"postselected", lambda_of(entry.lambda_postselected)},
        };
        csv += temp.label();
        for (const LambdaColumn& col : columns) {
            csv += "," + csv_cell(col.value);
            if (!col.value) continue;
            std::string& body = lambda_plots[col.name];
            if (body.empty()) {
                body = std::string("# temperature lambda_") + col.name + "\n";
            }
            body += temp.label() + " " + format_number(*col.value) + "\n";
        }
        csv += "\n";
    }
    if (cfg.formats.csv) write_text_file(out_path(cfg, "lambda.csv"), csv);
    if (cfg.formats.dat) {
        for (const auto& [name, body] : lambda_plots) {
            write_text_file(out_path(cfg, "lambda_" + name + ".dat"), body);
        }
        write_series_plots(cfg, sweep);
    }
    write_manifest(cfg, "sweep");
}

} // namespace otoc
