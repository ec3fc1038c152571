#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qlink/cli.hpp"
#include "qlink/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qlink - quantum-limited coherent optical link toolkit"};
    app.set_version_flag("--version", qlink::kVersion);
    app.require_subcommand(1);

    qlink::cli::CommonOptions common;
    std::string grid_text;
    std::string axis = "signal_power";
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
        if (needs_config) {
            cmd->add_option("--config", common.config, "configuration file")->required();
        }
        cmd->add_option("--out", common.out_dir, "output directory");
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { seed = v; seed_set = true; }, "RNG seed override");
    };

    auto* characterize =
        app.add_subcommand("characterize", "receiver noise, bandwidth and SNC figures");
    add_common(characterize);
    characterize->add_option("--grid", grid_text, "LO grid MIN:MAX:POINTS[:log|lin]");

    auto* capacity = app.add_subcommand("capacity", "capacity and energy-per-bit report");
    add_common(capacity);

    auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    add_common(sweep);
    sweep->add_option("--axis", axis, "signal_power or pump_power");
    sweep->add_option("--grid", grid_text, "grid MIN:MAX:POINTS[:log|lin]");

    auto* trace = app.add_subcommand("trace", "simulate a homodyne noise trace");
    add_common(trace);

    qlink::cli::EstimateOptions est;
    auto* estimate = app.add_subcommand("estimate", "estimate squeezing from a trace CSV");
    estimate->add_option("--trace", est.trace_csv, "trace CSV file")->required();
    estimate->add_option("--samples", est.n_samples, "subsample size");
    estimate->add_option("--kde-bandwidth", est.kde_bandwidth_db,
                         "KDE bandwidth in dB (0 = Silverman)");
    estimate->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { est.seed = v; }, "estimator seed");

    CLI11_PARSE(app, argc, argv);

    if (seed_set) common.seed = seed;

    std::optional<qlink::cli::GridSpec> grid;
    if (!grid_text.empty()) {
        try {
            grid = qlink::cli::GridSpec::parse(grid_text);
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return qlink::cli::kExitConfigError;
        }
    }

    if (characterize->parsed()) {
        return qlink::cli::run_characterize(common, grid, std::cout, std::cerr);
    }
    if (capacity->parsed()) return qlink::cli::run_capacity(common, std::cout, std::cerr);
    if (sweep->parsed()) return qlink::cli::run_sweep(common, axis, grid, std::cout, std::cerr);
    if (trace->parsed()) return qlink::cli::run_trace(common, std::cout, std::cerr);
    if (estimate->parsed()) return qlink::cli::run_estimate(est, std::cout, std::cerr);
    return qlink::cli::kExitOk;
}
