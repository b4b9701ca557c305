// Experiment-runner executable. All the work lives in the library; this file
// only parses the command line, loads the config, and maps failures to exit
// codes: 0 success, 2 bad config or usage, 3 numerical or internal error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "otoc/commands.hpp"
#include "otoc/errors.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    int jobs = 1;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file")->required();
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--out", args.out_dir, "override the output directory");
    cmd->add_option("--jobs", args.jobs, "parallel sweep workers")
        ->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-temperature scrambling experiment runner"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* oracle = app.add_subcommand("oracle", "exact correlator table over the grid");
    CLI::App* tfd = app.add_subcommand("tfd-optimize", "optimize preparation angles per temperature");
    CLI::App* run = app.add_subcommand("run", "full pipeline: series table and manifest");
    CLI::App* sweep = app.add_subcommand("sweep", "decay-rate summary and plot files");
    for (CLI::App* cmd : {oracle, tfd, run, sweep}) add_common_options(cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        otoc::RunConfig cfg = otoc::load_config(args.config_path);
        if (args.seed) cfg.seed = *args.seed;
        if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;

        if (oracle->parsed()) {
            otoc::cmd_oracle(cfg);
        } else if (tfd->parsed()) {
            otoc::cmd_tfd_optimize(cfg);
        } else if (run->parsed()) {
            otoc::cmd_run(cfg, args.jobs);
        } else {
            otoc::cmd_sweep(cfg, args.jobs);
        }
        return 0;
    } catch (const otoc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const otoc::NotFoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
