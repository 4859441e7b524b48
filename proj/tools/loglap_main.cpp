#include "loglap/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"loglap: logarithmic-Laplacian operator calculus and observation-set experiments"};

    std::string config_path;
    loglap::CliOverrides overrides;
    bool list = false;

    app.add_option("config", config_path, "experiment config file (JSON)");
    app.add_option("--output-dir", overrides.output_dir,
                   "output directory (overrides config and LOGLAP_OUTPUT_DIR)");
    app.add_option("--seed", overrides.seed, "override the config seed");
    app.add_option("--threads", overrides.threads, "worker count for independent checks");
    app.add_option("--tolerance-scale", overrides.tolerance_scale,
                   "multiply all tolerances (exploratory runs)");
    app.add_flag("--list", list, "list the experiment kinds and exit");

    CLI11_PARSE(app, argc, argv);

    if (list) {
        std::cout << loglap::experiment_catalog();
        return 0;
    }
    if (config_path.empty()) {
        std::cerr << "usage: loglap <config.json> [--output-dir DIR] [--seed N] [--threads N]\n"
                     "       loglap --list\n";
        return 2;
    }
    return loglap::run_config_file(config_path, overrides);
}
