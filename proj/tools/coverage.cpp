// coverage: run experiment configs, plot result CSVs, reproduce presets.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "uavcov/cli/config.hpp"
#include "uavcov/cli/experiment.hpp"
#include "uavcov/cli/presets.hpp"
#include "uavcov/cli/svg_plot.hpp"
#include "uavcov/quad.hpp"

namespace fs = std::filesystem;
using namespace uavcov::cli;

namespace {

constexpr int kConfigFailure = 1;
constexpr int kNumericalFailure = 2;

int run_config(const ExperimentConfig& cfg, const std::optional<fs::path>& out_dir)
{
    try {
        for (const auto& path : run_experiment(cfg, out_dir)) std::cout << path.string() << '\n';
    } catch (const uavcov::NumericalError& e) {
        std::cerr << "coverage: numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "coverage: " << e.what() << '\n';
        return kConfigFailure;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Downlink SIR coverage of a finite aerial network"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "Evaluate every sweep of a config file, one CSV each");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("-o,--out-dir", out_dir, "Override [output] dir");

    std::string csv_path;
    std::string svg_path;
    auto* plot = app.add_subcommand("plot", "Render a result CSV as an SVG line plot");
    plot->add_option("csv", csv_path, "Result CSV")->required();
    plot->add_option("svg", svg_path, "Output SVG")->required();

    std::string preset;
    bool print_only = false;
    auto* pre = app.add_subcommand("preset", "Run a built-in figure preset");
    pre->add_option("name", preset, "Preset name")
        ->required()
        ->check(CLI::IsMember(preset_names()));
    pre->add_option("-o,--out-dir", out_dir, "Output directory (default: current)");
    pre->add_flag("--print", print_only, "Print the preset config instead of running it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kConfigFailure;
    }

    const std::optional<fs::path> out_override =
        out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir);

    if (*run) {
        ExperimentConfig cfg;
        try {
            cfg = load_config(config_path);
        } catch (const ConfigError& e) {
            std::cerr << "coverage: " << e.what() << '\n';
            return kConfigFailure;
        }
        return run_config(cfg, out_override);
    }

    if (*plot) {
        try {
            emit_plot(csv_path, svg_path);
        } catch (const std::exception& e) {
            std::cerr << "coverage: " << e.what() << '\n';
            return kConfigFailure;
        }
        std::cout << svg_path << '\n';
        return 0;
    }

    const auto text = preset_text(preset);
    if (print_only) {
        std::cout << *text;
        return 0;
    }
    ExperimentConfig cfg;
    try {
        std::istringstream in{std::string(*text)};
        cfg = parse_config(in, "preset:" + preset);
    } catch (const ConfigError& e) {
        std::cerr << "coverage: " << e.what() << '\n';
        return kConfigFailure;
    }
    return run_config(cfg, out_override ? out_override : std::optional<fs::path>(fs::path(".")));
}
