// Command-line front end: krein run|validate|schema

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "krein/config.hpp"

namespace {

int thread_count_from_env() {
    const char* env = std::getenv("KREIN_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n > 0 ? n : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete spectra, Krein signatures, Penrose plots, and Hamiltonian "
                 "bifurcation sweeps for multi-fluid and waterbag equilibria"};
    app.require_subcommand(1);

    std::string config_path, output_override, format_override;

    CLI::App* cmd_run = app.add_subcommand("run", "execute the analysis in a config file");
    cmd_run->add_option("config", config_path, "path to a JSON run config")->required();
    cmd_run->add_option("--output", output_override, "override output.path");
    cmd_run->add_option("--format", format_override, "override output.format (csv|json)");

    CLI::App* cmd_validate = app.add_subcommand("validate", "parse and validate a config file");
    cmd_validate->add_option("config", config_path, "path to a JSON run config")->required();

    app.add_subcommand("schema", "print the config schema and default tolerances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("schema")) {
            std::cout << krein::config_schema().dump(2) << "\n";
            return 0;
        }
        krein::RunConfig cfg = krein::load_config(config_path);
        if (!output_override.empty()) cfg.path = output_override;
        if (!format_override.empty()) {
            if (format_override == "csv")
                cfg.format = krein::RunConfig::OutputFormat::Csv;
            else if (format_override == "json")
                cfg.format = krein::RunConfig::OutputFormat::Json;
            else
                throw krein::ConfigError("config: --format must be csv or json");
        }
        if (app.got_subcommand("validate")) {
            std::cout << "ok\n";
            return 0;
        }
        krein::run(cfg, std::cout, thread_count_from_env());
        return 0;
    } catch (const krein::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const krein::PoleEvaluationError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const krein::DegenerateSystemError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const krein::TruncationError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const krein::OriginGrazingError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const krein::NoSignChangeError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const krein::NonResolvableProfileError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const krein::NotARootError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
