#include "otoc/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

#include "otoc/errors.hpp"
#include "otoc/noise.hpp"
#include "otoc/output.hpp"

namespace otoc {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& text, const std::string& key, int line) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty()) {
        throw ConfigError("bad number '" + text + "' for " + key, line);
    }
    return v;
}

long parse_long(const std::string& text, const std::string& key, int line) {
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE) {
        throw ConfigError("bad integer '" + text + "' for " + key, line);
    }
    return v;
}

int parse_int(const std::string& text, const std::string& key, int line) {
    const long v = parse_long(text, key, line);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError("integer '" + text + "' out of range for " + key, line);
    }
    return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& text, const std::string& key, int line) {
    if (text.empty() || text[0] == '-') {
        throw ConfigError("bad unsigned integer '" + text + "' for " + key, line);
    }
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || errno == ERANGE) {
        throw ConfigError("bad unsigned integer '" + text + "' for " + key, line);
    }
    return v;
}

bool parse_bool(const std::string& text, const std::string& key, int line) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError("expected true or false for " + key + ", got '" + text + "'", line);
}

// Everything past syntax: value ranges and cross-field rules. No line numbers
// here; these are statements about the whole config.
void validate_config(const RunConfig& cfg) {
    if (cfg.model.n_sites < 1) {
        throw ConfigError("n_sites must be at least 1");
    }
    if (cfg.model.n_sites > kMaxDenseSites) {
        throw ConfigError("n_sites " + std::to_string(cfg.model.n_sites) +
                          " exceeds the dense-simulation capacity of " +
                          std::to_string(kMaxDenseSites) + " sites");
    }
    if (!std::isfinite(cfg.model.coupling)) throw ConfigError("J must be finite");
    if (!std::isfinite(cfg.model.field)) throw ConfigError("g must be finite");
    if (cfg.temperatures.empty()) {
        throw ConfigError("temperatures needs at least one entry");
    }
    if (cfg.w_site < 1 || cfg.w_site > cfg.model.n_sites) {
        throw ConfigError("w_site " + std::to_string(cfg.w_site) + " outside 1.." +
                          std::to_string(cfg.model.n_sites));
    }
    if (cfg.v_site < 1 || cfg.v_site > cfg.model.n_sites) {
        throw ConfigError("v_site " + std::to_string(cfg.v_site) + " outside 1.." +
                          std::to_string(cfg.model.n_sites));
    }
    try {
        cfg.schedule.cumulative_times();
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }
    if (cfg.shots < 0) throw ConfigError("shots must be nonnegative");
    if (cfg.noise) {
        try {
            validate_noise_model(*cfg.noise);
        } catch (const ArgumentError& e) {
            throw ConfigError(e.what());
        }
        if (cfg.evolution == EvolutionMode::EXACT) {
            throw ConfigError("noise emulation needs digitized evolution; set evolution = trotter");
        }
        if (cfg.shots < 1) {
            throw ConfigError("noise emulation is per-shot Monte Carlo; set shots >= 1");
        }
    }
    if (cfg.pad_depth && cfg.evolution == EvolutionMode::EXACT) {
        throw ConfigError("pad_depth needs trotter evolution; exact evolution has no gates");
    }
    if (cfg.optimizer.restarts < 1) throw ConfigError("optimizer restarts must be at least 1");
    if (cfg.optimizer.max_evaluations < 1) {
        throw ConfigError("optimizer max_evaluations must be at least 1");
    }
    if (!(cfg.optimizer.simplex_tolerance > 0.0) ||
        !std::isfinite(cfg.optimizer.simplex_tolerance)) {
        throw ConfigError("optimizer tolerance must be positive and finite");
    }
    if (cfg.out_dir.empty()) throw ConfigError("output directory must not be empty");
    if (!cfg.formats.csv && !cfg.formats.dat) {
        throw ConfigError("formats needs csv, dat, or both");
    }
}

} // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    cfg.temperatures.clear();
    std::set<std::string> seen;
    std::string section;
    std::string raw;
    int line_no = 0;

    bool noise_enabled = false;
    NoiseModel noise;

    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("unterminated section header '" + line + "'", line_no);
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "experiment" && section != "noise" &&
                section != "optimizer" && section != "output") {
                throw ConfigError("unknown section [" + section + "]", line_no);
            }
            if (section == "noise") noise_enabled = true;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError("key '" + key + "' appears before any [section]", line_no);
        }
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        if (value.empty()) throw ConfigError("empty value for " + key, line_no);
        if (!seen.insert(section + "." + key).second) {
            throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line_no);
        }

        if (section == "model") {
            if (key == "n_sites") {
                cfg.model.n_sites = parse_int(value, key, line_no);
            } else if (key == "J") {
                cfg.model.coupling = parse_double(value, key, line_no);
            } else if (key == "g") {
                cfg.model.field = parse_double(value, key, line_no);
            } else {
                throw ConfigError("unknown key '" + key + "' in [model]", line_no);
            }
        } else if (section == "experiment") {
            if (key == "temperatures") {
                for (const std::string& tok : split_tokens(value)) {
                    try {
                        cfg.temperatures.push_back(Temperature::parse(tok));
                    } catch (const ArgumentError& e) {
                        throw ConfigError(e.what(), line_no);
                    }
                }
            } else if (key == "prep") {
                if (value == "exact") {
                    cfg.prep = PrepMode::EXACT_TFD;
                } else if (value == "variational") {
                    cfg.prep = PrepMode::VARIATIONAL;
                } else {
                    throw ConfigError("prep must be exact or variational, got '" + value + "'",
                                      line_no);
                }
            } else if (key == "evolution") {
                if (value == "trotter") {
                    cfg.evolution = EvolutionMode::TROTTER;
                } else if (value == "exact") {
                    cfg.evolution = EvolutionMode::EXACT;
                } else {
                    throw ConfigError("evolution must be trotter or exact, got '" + value + "'",
                                      line_no);
                }
            } else if (key == "schedule") {
                cfg.schedule.step_durations.clear();
                for (const std::string& tok : split_tokens(value)) {
                    cfg.schedule.step_durations.push_back(parse_double(tok, key, line_no));
                }
            } else if (key == "shots") {
                cfg.shots = parse_long(value, key, line_no);
            } else if (key == "seed") {
                cfg.seed = parse_u64(value, key, line_no);
            } else if (key == "w_site") {
                cfg.w_site = parse_int(value, key, line_no);
            } else if (key == "v_site") {
                cfg.v_site = parse_int(value, key, line_no);
            } else if (key == "pad_depth") {
                cfg.pad_depth = parse_bool(value, key, line_no);
            } else {
                throw ConfigError("unknown key '" + key + "' in [experiment]", line_no);
            }
        } else if (section == "noise") {
            if (key == "p1") {
                noise.p1 = parse_double(value, key, line_no);
            } else if (key == "p2") {
                noise.p2 = parse_double(value, key, line_no);
            } else if (key == "p_readout") {
                noise.p_readout = parse_double(value, key, line_no);
            } else {
                throw ConfigError("unknown key '" + key + "' in [noise]", line_no);
            }
        } else if (section == "optimizer") {
            if (key == "restarts") {
                cfg.optimizer.restarts = parse_int(value, key, line_no);
            } else if (key == "max_evaluations") {
                cfg.optimizer.max_evaluations = parse_int(value, key, line_no);
            } else if (key == "tolerance") {
                cfg.optimizer.simplex_tolerance = parse_double(value, key, line_no);
            } else {
                throw ConfigError("unknown key '" + key + "' in [optimizer]", line_no);
            }
        } else { // output
            if (key == "directory") {
                cfg.out_dir = value;
            } else if (key == "formats") {
                cfg.formats.csv = false;
                cfg.formats.dat = false;
                for (const std::string& tok : split_tokens(value)) {
                    if (tok == "csv") {
                        cfg.formats.csv = true;
                    } else if (tok == "dat") {
                        cfg.formats.dat = true;
                    } else {
                        throw ConfigError("unknown format '" + tok + "' (want csv or dat)",
                                          line_no);
                    }
                }
            } else {
                throw ConfigError("unknown key '" + key + "' in [output]", line_no);
            }
        }
    }

    for (const char* required : {"model.n_sites", "model.J", "model.g",
                                 "experiment.temperatures"}) {
        if (!seen.count(required)) {
            const std::string full(required);
            const auto dot = full.find('.');
            throw ConfigError("missing required field " + full.substr(dot + 1) + " in [" +
                              full.substr(0, dot) + "]");
        }
    }
    if (noise_enabled) cfg.noise = noise;

    validate_config(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open config file " + path);
    return parse_config(in);
}

std::string serialize_config(const RunConfig& cfg) {
    std::string out;
    out += "[model]\n";
    out += "n_sites = " + std::to_string(cfg.model.n_sites) + "\n";
    out += "J = " + format_number(cfg.model.coupling) + "\n";
    out += "g = " + format_number(cfg.model.field) + "\n";
    out += "\n[experiment]\n";
    out += "temperatures =";
    for (const Temperature& t : cfg.temperatures) out += " " + t.label();
    out += "\n";
    out += std::string("prep = ") + (cfg.prep == PrepMode::EXACT_TFD ? "exact" : "variational") +
           "\n";
    out += std::string("evolution = ") +
           (cfg.evolution == EvolutionMode::TROTTER ? "trotter" : "exact") + "\n";
    out += "schedule =";
    for (double dt : cfg.schedule.step_durations) out += " " + format_number(dt);
    out += "\n";
    out += "shots = " + std::to_string(cfg.shots) + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    out += "w_site = " + std::to_string(cfg.w_site) + "\n";
    out += "v_site = " + std::to_string(cfg.v_site) + "\n";
    out += std::string("pad_depth = ") + (cfg.pad_depth ? "true" : "false") + "\n";
    if (cfg.noise) {
        out += "\n[noise]\n";
        out += "p1 = " + format_number(cfg.noise->p1) + "\n";
        out += "p2 = " + format_number(cfg.noise->p2) + "\n";
        out += "p_readout = " + format_number(cfg.noise->p_readout) + "\n";
    }
    out += "\n[optimizer]\n";
    out += "restarts = " + std::to_string(cfg.optimizer.restarts) + "\n";
    out += "max_evaluations = " + std::to_string(cfg.optimizer.max_evaluations) + "\n";
    out += "tolerance = " + format_number(cfg.optimizer.simplex_tolerance) + "\n";
    out += "\n[output]\n";
    out += "directory = " + cfg.out_dir + "\n";
    out += "formats =";
    if (cfg.formats.csv) out += " csv";
    if (cfg.formats.dat) out += " dat";
    out += "\n";
    return out;
}

OtocExperiment experiment_from(const RunConfig& cfg) {
    OtocExperiment exp;
    exp.tfim = cfg.model;
    exp.prep = cfg.prep;
    exp.w_site = cfg.w_site;
    exp.v_site = cfg.v_site;
    exp.schedule = cfg.schedule;
    exp.evolution = cfg.evolution;
    exp.shots = cfg.shots;
    exp.noise = cfg.noise;
    exp.seed = cfg.seed;
    exp.pad_depth = cfg.pad_depth;
    return exp;
}

} // namespace otoc
