// decotime.cpp — Command-line front end: trajectory, tmeasure, sweep, selftest.
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "decotime/commands.hpp"
#include "decotime/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string config;
    std::string output;
    std::string format;
    unsigned jobs{0};
    long long seed{0}; // accepted for harness compatibility; every method is deterministic
};

void add_run_options(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "scenario file (key = value lines)")->required();
    sub->add_option("--output", o.output, "write here instead of output.path / stdout");
    sub->add_option("--format", o.format, "csv or json (overrides output.format)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", o.jobs, "sweep worker threads (0 = all processors)");
    sub->add_option("--seed", o.seed, "ignored");
}

decotime::cli::ScenarioConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw decotime::Error(decotime::ErrorCode::ConfigError, path + ": cannot open config file");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return decotime::cli::parse_config(text.str());
}

void write(const std::string& text, const Options& o, const decotime::cli::ScenarioConfig& c) {
    const std::string path = !o.output.empty() ? o.output : c.output_path.value_or("");
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw decotime::Error(decotime::ErrorCode::ConfigError, path + ": cannot open output file");
    }
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    using decotime::cli::OutputFormat;

    CLI::App app{"decotime: qubit decoherence under a finite-time measurement"};
    app.set_version_flag("--version", std::string(decotime::cli::version()));
    app.require_subcommand(1);

    Options o;
    auto* trajectory = app.add_subcommand("trajectory", "rho(t) samples over the time window");
    auto* tmeasure = app.add_subcommand("tmeasure", "measurement time t_M as JSON");
    auto* sweep = app.add_subcommand("sweep", "t_M over a (lambda, eta) grid");
    auto* selftest = app.add_subcommand("selftest", "oracle-equivalence checks");
    for (auto* sub : {trajectory, tmeasure, sweep}) {
        add_run_options(sub, o);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (selftest->parsed()) {
            return decotime::cli::run_selftest(std::cout) ? 0 : kExitNumerical;
        }
        const auto config = load(o.config);
        OutputFormat format = config.format;
        if (!o.format.empty()) {
            format = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
        }
        if (trajectory->parsed()) {
            write(decotime::cli::run_trajectory(config, format).text, o, config);
        } else if (tmeasure->parsed()) {
            write(decotime::cli::run_tmeasure(config).text, o, config);
        } else {
            const auto result = decotime::cli::run_sweep(config, format, o.jobs);
            write(result.text, o, config);
            if (!result.any_success) {
                std::cerr << "decotime: no sweep cell converged\n";
                return kExitNumerical;
            }
        }
    } catch (const decotime::Error& e) {
        std::cerr << "decotime: " << e.what() << '\n';
        return e.code() == decotime::ErrorCode::ConfigError ? kExitConfig : kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "decotime: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
