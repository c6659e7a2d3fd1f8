#include "uavcov/cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace uavcov::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 180.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Column
{
    std::size_t index;  // into ResultRow::cells()
    const char* name;
    bool simulated;
    const char* dash;
};

const Column kColumns[] = {
    {0, "pc_exact", false, ""},   {1, "pc_clt", false, "6,3"},  {2, "pc_lower", false, "2,3"},
    {3, "pc_upper", false, "2,3"}, {4, "pc_mc", true, ""},      {6, "pc_block_mix", false, "8,4"},
    {7, "pc_block_sim", true, ""},
};

struct Point
{
    double x;
    double y;
};

struct Curve
{
    const Column* column;
    std::vector<Point> points;
};

struct Series
{
    std::string label;
    std::vector<Curve> curves;
};

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

}  // namespace

std::string render_svg(const ResultTable& table)
{
    std::set<double> betas;
    for (const auto& r : table.rows) betas.insert(r.beta_db);
    const bool over_sweep = table.sweep_variable != "beta" && betas.size() == 1;
    const std::string x_label = over_sweep ? table.sweep_variable : "beta_db";

    // Group rows into series.
    std::vector<Series> series;
    std::map<double, std::size_t> by_value;
    for (const auto& r : table.rows) {
        double key = 0.0;
        std::string label = "coverage";
        if (!over_sweep && table.sweep_variable != "beta") {
            key = r.sweep_value;
            label = table.sweep_variable + " = " + format_number(r.sweep_value);
        }
        auto [it, inserted] = by_value.try_emplace(key, series.size());
        if (inserted) {
            Series s{label, {}};
            for (const auto& c : kColumns) s.curves.push_back({&c, {}});
            series.push_back(std::move(s));
        }
        const auto cells = r.cells();
        const double x = over_sweep ? r.sweep_value : r.beta_db;
        for (auto& curve : series[it->second].curves) {
            const auto& cell = cells[curve.column->index];
            if (cell && std::isfinite(*cell) && std::isfinite(x)) {
                curve.points.push_back({x, *cell});
            }
        }
    }
    std::erase_if(series, [](Series& s) {
        std::erase_if(s.curves, [](const Curve& c) { return c.points.empty(); });
        return s.curves.empty();
    });
    if (series.empty()) throw PlotError("no data to plot: every result column is empty");

    double x_min = INFINITY, x_max = -INFINITY;
    for (const auto& s : series) {
        for (const auto& c : s.curves) {
            for (const auto& p : c.points) {
                x_min = std::min(x_min, p.x);
                x_max = std::max(x_max, p.x);
            }
        }
    }
    if (x_max == x_min) {
        x_min -= 1.0;
        x_max += 1.0;
    }
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return kTop + (1.0 - std::clamp(y, 0.0, 1.0)) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double y = i / 5.0;
        svg << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << py(y) << "\" x2=\"" << kLeft
            << "\" y2=\"" << py(y) << "\" stroke=\"black\"/>";
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(y) + 4
            << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
        const double x = x_min + (x_max - x_min) * i / 5.0;
        svg << "<line x1=\"" << px(x) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << px(x)
            << "\" y2=\"" << kTop + plot_h + 4 << "\" stroke=\"black\"/>";
        svg << "<text x=\"" << px(x) << "\" y=\"" << kTop + plot_h + 18
            << "\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 18 " << kTop + plot_h / 2 << ")\">coverage probability</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % std::size(kPalette)];
        svg << "<g class=\"series\" data-label=\"" << escape(s.label) << "\">\n";
        for (const auto& c : s.curves) {
            if (!c.column->simulated && c.points.size() > 1) {
                svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
                if (*c.column->dash) svg << " stroke-dasharray=\"" << c.column->dash << '"';
                svg << " points=\"";
                for (const auto& p : c.points) svg << px(p.x) << ',' << py(p.y) << ' ';
                svg << "\"/>\n";
            }
            for (const auto& p : c.points) {
                svg << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\""
                    << (c.column->simulated ? 4 : 1.5) << '"';
                if (c.column->simulated) {
                    svg << " fill=\"none\" stroke=\"" << color << '"';
                } else {
                    svg << " fill=\"" << color << '"';
                }
                svg << "><title>" << c.column->name << " x=" << format_number(p.x)
                    << " y=" << format_number(p.y) << "</title></circle>\n";
            }
        }
        const double ly = kTop + 10 + 20.0 * static_cast<double>(si);
        const double lx = kWidth - kRight + 15;
        svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 20 << "\" y2=\""
            << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
        svg << "<text x=\"" << lx + 26 << "\" y=\"" << ly + 4 << "\">" << escape(s.label)
            << "</text>\n";
        svg << "</g>\n";
    }
    svg << "<text x=\"" << kWidth - kRight + 15 << "\" y=\"" << kHeight - kBottom
        << "\" font-size=\"10\">lines: analytic, circles: simulated</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path)
{
    std::ifstream in(csv_path);
    if (!in) throw PlotError("cannot open " + csv_path.string());
    const auto table = read_csv(in, csv_path.string());
    const std::string svg = render_svg(table);
    std::ofstream out(svg_path);
    if (!out) throw PlotError("cannot write " + svg_path.string());
    out << svg;
    if (!out) throw PlotError("error writing " + svg_path.string());
}

}  // namespace uavcov::cli
