#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "otoc/protocol.hpp"

namespace otoc {

// Which result files a command writes. The manifest is always written.
struct OutputFormats {
    bool csv = true;
    bool dat = true;
};

// Everything a run needs, read from one flat sectioned text file:
//
//   [model]                  # required section
//   n_sites = 3              # required
//   J = 1                    # required
//   g = 1                    # required
//
//   [experiment]
//   temperatures = 0 0.5 1 2 3.5 6 inf   # required, `inf` accepted
//   prep = exact             # exact | variational
//   evolution = trotter      # trotter | exact
//   schedule = 0.2 0.2 0.4   # step durations, units of 1/J
//   shots = 0                # 0 = expectation values only
//   seed = 20220517
//   w_site = 1               # perturbation site, 1-based
//   v_site = 1               # probe site, 1-based
//   pad_depth = false
//
//   [noise]                  # present = noise on (needs trotter + shots)
//   p1 = 0.005
//   p2 = 0.015
//   p_readout = 0.01
//
//   [optimizer]              # used by tfd-optimize and variational prep
//   restarts = 20
//   max_evaluations = 2000
//   tolerance = 1e-06
//
//   [output]
//   directory = out
//   formats = csv dat
//
// `#` starts a comment, blank lines are skipped, keys may not repeat, and
// unknown sections or keys are rejected with their line number.
struct RunConfig {
    TfimParams model;
    std::vector<Temperature> temperatures;
    PrepMode prep = PrepMode::EXACT_TFD;
    EvolutionMode evolution = EvolutionMode::TROTTER;
    TrotterSchedule schedule;
    long shots = 0;
    std::uint64_t seed = 20220517;
    int w_site = 1;
    int v_site = 1;
    bool pad_depth = false;
    std::optional<NoiseModel> noise;
    OptimizerSettings optimizer;
    std::string out_dir = "out";
    OutputFormats formats;
};

// Parses and validates. Throws ConfigError carrying the offending line for
// syntax problems; semantic problems (capacity, cross-field rules) report
// without a line. Every module invariant is checked here, before any
// computation starts.
RunConfig parse_config(std::istream& in);
RunConfig parse_config(const std::string& text);

// parse_config over a file; NotFoundError when it cannot be opened.
RunConfig load_config(const std::string& path);

// Canonical text form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& cfg);

// The experiment a config describes, for the temperature passed separately
// through temperature_sweep.
OtocExperiment experiment_from(const RunConfig& cfg);

} // namespace otoc
