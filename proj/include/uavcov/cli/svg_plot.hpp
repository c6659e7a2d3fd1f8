#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "uavcov/cli/csv.hpp"

namespace uavcov::cli {

class PlotError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Line plot of a result table. One labelled series per sweep value (or a
/// single series when the sweep is over beta); analytic columns are drawn
/// as lines, simulated ones as hollow markers. Every point carries a
/// <title> of the form "column x=<x> y=<y>" with the CSV values verbatim.
/// When the table has a single threshold the x axis is the sweep variable.
std::string render_svg(const ResultTable& table);

/// Reads the CSV, renders, writes the SVG. Nothing is written on error.
void emit_plot(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path);

}  // namespace uavcov::cli
