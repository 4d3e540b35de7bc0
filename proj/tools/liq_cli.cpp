// Batch front end: loads a configuration file, runs named experiments, and
// writes CSV artifacts plus a manifest per experiment. Exit status is 0 only
// if every verification experiment passed its thresholds.

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "liq/experiments.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    long seed = -1;
    long paths = -1;
    int grid_nt = -1;
    int grid_ny = -1;
    double refine_ratio = -1.0;
    double series_tol = -1.0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("config", opts.config_path, "experiment configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", opts.out_dir, "directory for CSV artifacts and manifests");
    cmd->add_option("--seed", opts.seed, "override simulation.seed");
    cmd->add_option("--paths", opts.paths, "override simulation.paths");
    cmd->add_option("--grid-nt", opts.grid_nt, "override grid.nt");
    cmd->add_option("--grid-ny", opts.grid_ny, "override grid.ny");
    cmd->add_option("--refine-ratio", opts.refine_ratio, "override grid.refine_ratio");
    cmd->add_option("--series-tol", opts.series_tol, "override grid.series_tol");
}

int run_experiments(const CommonOptions& opts, const std::vector<std::string>& names) {
    liq::ConfigFile cfg = liq::ConfigFile::parse_file(opts.config_path);
    if (opts.seed >= 0) cfg.override_value("simulation.seed", std::to_string(opts.seed));
    if (opts.paths >= 0) cfg.override_value("simulation.paths", std::to_string(opts.paths));
    if (opts.grid_nt > 0) cfg.override_value("grid.nt", std::to_string(opts.grid_nt));
    if (opts.grid_ny > 0) cfg.override_value("grid.ny", std::to_string(opts.grid_ny));
    if (opts.refine_ratio > 0) cfg.override_value("grid.refine_ratio", std::to_string(opts.refine_ratio));
    if (opts.series_tol > 0) cfg.override_value("grid.series_tol", std::to_string(opts.series_tol));

    const liq::ExperimentConfig config = liq::load_experiment_config(cfg);

    std::vector<std::string> to_run = names;
    if (to_run.empty()) to_run = config.experiments;
    if (to_run.empty()) {
        std::fprintf(stderr, "error: no experiments requested (command line or [experiments] run)\n");
        return 2;
    }

    bool all_passed = true;
    for (const std::string& name : to_run) {
        const liq::ExperimentOutcome outcome =
            liq::run_experiment(name, config, cfg.content_hash(), opts.out_dir);
        std::printf("[%s] %s: %s\n", outcome.passed ? "ok" : "FAIL", outcome.name.c_str(),
                    outcome.detail.c_str());
        if (!outcome.passed) all_passed = false;
    }
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal portfolio liquidation: singular-terminal-value PDE solver, "
                 "Monte-Carlo verification, and strategy simulation"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd;
        CommonOptions opts;
        std::string experiment;
    };
    std::vector<Sub> subs;
    subs.reserve(liq::known_experiments().size());  // CLI11 keeps pointers into opts
    for (const std::string& name : liq::known_experiments()) {
        Sub sub;
        sub.cmd = app.add_subcommand(name, "run the " + name + " experiment");
        sub.experiment = name;
        subs.push_back(std::move(sub));
        add_common(subs.back().cmd, subs.back().opts);
    }

    CommonOptions run_opts;
    std::vector<std::string> run_names;
    CLI::App* run_cmd = app.add_subcommand("run", "run the config's experiment list");
    add_common(run_cmd, run_opts);
    run_cmd->add_option("experiments", run_names, "experiment names (defaults to the config list)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return run_experiments(run_opts, run_names);
        for (const Sub& sub : subs)
            if (sub.cmd->parsed()) return run_experiments(sub.opts, {sub.experiment});
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
