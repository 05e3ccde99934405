// modnod: command-line front end for the modulated opinion dynamics library.

#include "modnod/io/commands.hpp"
#include "modnod/io/config.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

namespace {

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("modnod");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* level = std::getenv("MODNOD_LOG");
    spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"Modulated nonlinear opinion dynamics: simulation, equilibria, bifurcation diagrams"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path = "-";
    std::string out_dir = ".";
    bool no_svg = false;
    bool quiet = false;
    std::int64_t seed = -1;
    app.add_option("--config", config_path, "JSON run configuration ('-' reads stdin)");
    app.add_option("--out", out_dir, "Directory for output files");
    app.add_flag("--no-svg", no_svg, "Skip the SVG diagram");
    app.add_option("--seed", seed, "Seed for randomized initial guesses (overrides the config)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--quiet", quiet, "Suppress the summary line");

    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "Integrate the dynamics from x0 at fixed u0"},
        {"equilibrium", "Solve for an equilibrium at fixed u0 and report its stability"},
        {"diagram", "Trace the bifurcation diagram over a u0 range"},
        {"reduce", "Reduced-equation derivatives and singularity type at u0*"},
        {"analyze", "Leading eigenpair and critical attention u0*"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);
    auto* scenario = app.add_subcommand("scenario", "Built-in scenarios");
    scenario->require_subcommand(1);
    scenario->add_subcommand("list", "List scenario names and default parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : modnod::io::kExitConfig;
    }

    if (scenario->parsed()) {
        std::cout << modnod::io::scenario_list();
        return modnod::io::kExitOk;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    modnod::io::RunConfig cfg;
    try {
        cfg = modnod::io::parse_config(config_path);
    } catch (const modnod::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return modnod::io::kExitConfig;
    }
    spdlog::info("running '{}' on a {}-node network", command, cfg.spec.size());

    modnod::io::OutputOptions opt;
    opt.out_dir = out_dir;
    opt.svg = !no_svg;
    opt.quiet = quiet;
    if (seed >= 0) opt.seed = static_cast<std::uint64_t>(seed);

    const auto start = std::chrono::steady_clock::now();
    const int code = modnod::io::run_command(command, cfg, opt, std::cout, std::cerr);
    spdlog::info("'{}' finished with exit code {} in {} ms", command, code,
                 std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                     .count());
    return code;
}
