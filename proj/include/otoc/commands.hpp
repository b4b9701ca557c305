#pragma once

#include "otoc/config.hpp"

namespace otoc {

// The four experiment-runner commands. Each writes its result files under
// cfg.out_dir and prints warnings (never results) to stderr. Errors are
// reported by throwing: ConfigError and NotFoundError mean a bad config or
// usage, anything else is a numerical or internal failure; the executable
// maps those to exit codes 2 and 3.

// Exact correlator table: oracle.csv with one row per (temperature, time).
void cmd_oracle(const RunConfig& cfg);

// Optimized preparation angles per temperature: tfd_params.csv with the
// angles in units of pi and the achieved overlap-squared. Any fidelity below
// the 0.97 target earns a warning line.
void cmd_tfd_optimize(const RunConfig& cfg);

// Full pipeline over all configured temperatures: otoc.csv plus manifest.txt.
// A postselection-starved time point leaves its cells empty and warns.
void cmd_run(const RunConfig& cfg, int jobs);

// Decay-rate summary lambda.csv, per-curve plot files, and manifest.txt.
void cmd_sweep(const RunConfig& cfg, int jobs);

} // namespace otoc
