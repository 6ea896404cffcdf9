#include <CLI11.hpp>

#include <iostream>

#include "nlneumann/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal Neumann problems on the half-line: solves, sweeps and numerical certificates."};
    std::string config_path;
    std::string subcommand;
    std::string out_dir = ".";
    app.add_option("config", config_path, "Config file (flat key=value)")->required();
    app.add_option("subcommand", subcommand,
                   "solve | sweep-alpha | verify-appendix | check-reflections | gamma-profile | holder "
                   "(defaults to the config's subcommand key)");
    app.add_option("--out", out_dir, "Output directory");
    app.set_version_flag("--version", nlneumann::kToolVersion);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        const nlneumann::RunConfig config = nlneumann::load_config(config_path);
        const nlneumann::RunResult r = nlneumann::run(config, subcommand, out_dir);
        if (r.exit_code == 2) {
            std::cerr << "error: " << r.message << "\n";
        } else {
            std::cout << r.file.string() << ": " << r.message << "\n";
        }
        return r.exit_code;
    } catch (const nlneumann::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
