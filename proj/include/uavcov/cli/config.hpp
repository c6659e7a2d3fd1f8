#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavcov/analytic.hpp"
#include "uavcov/blockage.hpp"
#include "uavcov/geometry.hpp"
#include "uavcov/mcsim.hpp"
#include "uavcov/quad.hpp"

namespace uavcov::cli {

/// Configuration problem anchored at a line of the source (0: whole file).
class ConfigError : public std::runtime_error
{
public:
    ConfigError(const std::string& source, int line, const std::string& message);

    int line() const { return line_; }

private:
    int line_;
};

enum class SweepVariable { beta, height, x0, m, alpha, n_nodes };

enum class Engine { exact, clt, bounds, mc, blockage };

std::string to_string(SweepVariable v);
std::string to_string(Engine e);

/// Base parameters in SI units and linear ratios. The file itself uses km
/// and dB; conversion happens in the parser only.
struct Scenario
{
    NetworkConfig network{5, 10e3, 10e3};
    ChannelModel channel{};
    double x0 = 0.0;  // m
    MonteCarloConfig mc{};
    BlockageScene blockage{};
    double p_block = -1.0;  // < 0: estimate from the geometric simulation
    QuadratureSpec quadrature{};
};

struct Sweep
{
    std::string name;
    SweepVariable variable = SweepVariable::beta;
    std::vector<double> values;   // in file units (km for height/x0)
    std::vector<double> beta_db;  // strictly increasing
    std::vector<Engine> engines;
    Scenario scenario;            // base scenario with this sweep's overrides applied
    int line = 0;

    bool wants(Engine e) const;
};

struct ExperimentConfig
{
    Scenario base;
    std::string output_dir = ".";
    std::string output_prefix;
    std::vector<Sweep> sweeps;
};

ExperimentConfig parse_config(std::istream& in, const std::string& source_name);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one sweep value to a scenario. For `beta` the scenario is
/// unchanged; `m` sets both fading shapes.
Scenario apply_sweep_value(const Scenario& base, SweepVariable variable, double value);

/// Parses a decimal number or "inf".
double parse_number(const std::string& text);

}  // namespace uavcov::cli
