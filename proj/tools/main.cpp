// biphoton-cli: scenario runner. Exit codes: 0 ok, 2 configuration error,
// 3 numerical or degenerate-data error, 1 I/O failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "biphoton/errors.hpp"
#include "scenario/config.hpp"
#include "scenario/result.hpp"
#include "scenario/runner.hpp"

namespace sc = biphoton::scenario;

namespace {

int report(const std::string& kind, const std::string& message, int code) {
    std::cerr << nlohmann::json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << std::endl;
    return code;
}

nlohmann::json read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw biphoton::ConfigError("cannot read config file " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw biphoton::ConfigError(path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biphoton polarization-entanglement scenario runner"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> runs;
    std::optional<std::string> preset;
    bool quiet = false;
    app.add_option("--config", config_path, "Scenario JSON file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory for summary.json and CSV curves")->capture_default_str();
    app.add_option("--seed", seed, "Monte-Carlo seed (overrides run.seed)");
    app.add_option("--runs", runs, "Monte-Carlo repetitions (overrides run.runs)");
    app.add_option("--preset", preset, "paper-ideal | paper-calibrated | gvd-off | paper-raw-visibility");
    app.add_flag("--quiet", quiet, "Do not print the scalar table");

    for (const char* name : {"fringe", "delay-scan", "chsh", "s-curve", "budget"}) {
        app.add_subcommand(name);
    }
    app.get_subcommand("fringe")->description("Coincidence fringes and visibilities versus theta2");
    app.get_subcommand("delay-scan")->description("Spectral overlap versus compensation delay");
    app.get_subcommand("chsh")->description("CHSH S at one setting from simulated counts");
    app.get_subcommand("s-curve")->description("S versus analyzer angle, model and Monte-Carlo");
    app.get_subcommand("budget")->description("Pump power chain and conversion efficiency");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("config", e.what(), 2);
    }

    try {
        const auto doc = config_path.empty() ? nlohmann::json::object() : read_config_file(config_path);
        auto config = sc::load_config(doc, preset);
        if (seed) config.run.seed = *seed;
        if (runs) config.run.runs = *runs;
        config.validate();

        const std::string command = app.get_subcommands().front()->get_name();
        const auto record = sc::run_command(command, config);
        sc::write_result(record, out_dir);
        if (!quiet) std::cout << sc::format_scalars(record);
        return 0;
    } catch (const biphoton::ConfigError& e) {
        return report("config", e.what(), 2);
    } catch (const biphoton::DomainError& e) {
        return report("numerical", e.what(), 3);
    } catch (const biphoton::DegenerateInputError& e) {
        return report("numerical", e.what(), 3);
    } catch (const std::exception& e) {
        return report("io", e.what(), 1);
    }
}
