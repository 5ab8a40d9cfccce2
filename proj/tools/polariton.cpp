// Command-line driver: polariton <task> --config <path> [--out <dir>] [--validate-only]
//
// Exit status: 0 all checks pass, 2 configuration error, 3 numerical failure.

#include "polariton/app.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    namespace app = polariton::app;

    CLI::App cli{"Dispersive-dielectric mode quantization toolkit"};
    std::string task, config, out = "out";
    bool validate_only = false;
    cli.add_option("task", task, "task to run")
        ->required()
        ->check(CLI::IsMember(polariton::io::task_names()));
    cli.add_option("--config,-c", config, "JSON configuration file")->required();
    cli.add_option("--out,-o", out, "output directory for artifacts and report.txt");
    cli.add_flag("--validate-only", validate_only, "print diagnostics and exit without computing");
    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : app::exit_config_error;
    }

    polariton::io::RunConfig cfg;
    try {
        cfg = polariton::io::load_config(config);
    } catch (const std::exception &e) {
        std::cerr << e.what() << "\n";
        return app::exit_config_error;
    }
    if (!cfg.task.empty() && cfg.task != task) {
        std::cerr << "ConfigError: config declares task '" << cfg.task << "' but '" << task << "' was requested\n";
        return app::exit_config_error;
    }
    cfg.task = task;

    if (validate_only) {
        const auto diags = app::validate(cfg);
        for (const auto &d : diags)
            std::cout << d.where << ": " << d.message << "\n";
        if (diags.empty())
            std::cout << "config valid\n";
        return diags.empty() ? app::exit_ok : app::exit_config_error;
    }
    return app::run(cfg, out, std::cout);
}
