#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "uavcov/cli/config.hpp"
#include "uavcov/cli/csv.hpp"
#include "uavcov/cli/experiment.hpp"
#include "uavcov/cli/presets.hpp"
#include "uavcov/cli/svg_plot.hpp"

using namespace uavcov;
using namespace uavcov::cli;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

int error_line(const std::string& text)
{
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

const char* const kMinimal = R"(
[network]
n_nodes = 4
disk_radius_km = 5
altitude_km = 2

[channel]
alpha = 3
m = 2
m0 = 2

[receiver]
x0_km = 1.5

[mc]
trials = 500
seed = 9

[sweep]
name = base
variable = beta
beta_db = -5:2.5:5
engines = exact, mc
)";

fs::path temp_dir(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("uavcov_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("config: units and defaults")
{
    const auto cfg = parse(kMinimal);
    REQUIRE(cfg.sweeps.size() == 1);
    const auto& s = cfg.sweeps[0].scenario;
    CHECK(s.network.n_nodes == 4);
    CHECK(s.network.disk_radius == 5e3);
    CHECK(s.network.altitude == 2e3);
    CHECK(s.x0 == 1.5e3);
    CHECK(s.channel.m_interferer == 2.0);
    CHECK(s.mc.trials == 500);
    CHECK(cfg.sweeps[0].beta_db == std::vector<double>{-5, -2.5, 0, 2.5, 5});
    CHECK(cfg.sweeps[0].wants(Engine::exact));
    CHECK_FALSE(cfg.sweeps[0].wants(Engine::clt));
}

TEST_CASE("config: sweep overrides and inf")
{
    const auto cfg = parse(std::string(kMinimal) + R"(
[sweep]
name = tall
variable = m
values = 1, inf
beta_db = 0, 3
engines = clt
network.altitude_km = 4
channel.alpha = 2.5
)");
    REQUIRE(cfg.sweeps.size() == 2);
    CHECK(cfg.sweeps[1].scenario.network.altitude == 4e3);
    CHECK(cfg.sweeps[1].scenario.channel.alpha == 2.5);
    CHECK(std::isinf(cfg.sweeps[1].values[1]));
    CHECK(cfg.sweeps[0].scenario.network.altitude == 2e3);
    const auto s = apply_sweep_value(cfg.sweeps[1].scenario, SweepVariable::m, kNoFading);
    CHECK(s.channel.no_fading());
}

TEST_CASE("config: errors carry line numbers")
{
    CHECK(error_line("[network]\nn_nodes = 4\nbogus = 1\n") == 3);
    CHECK(error_line("[nowhere]\n") == 1);
    CHECK(error_line("[network]\nn_nodes = four\n") == 2);
    CHECK(error_line("[network]\nn_nodes = 2.5\n") == 2);
    CHECK(error_line("key = 1\n") == 1);
    CHECK(error_line("[network]\njust text\n") == 2);
    CHECK(error_line("[channel]\nalpha = 1.5\n[sweep]\nvariable = beta\nbeta_db = 0\n") == 3);
    CHECK(error_line("[sweep]\nvariable = beta\nbeta_db = 0, 0\n") == 3);
    CHECK(error_line("[sweep]\nvariable = beta\nbeta_db = 5:1:0\n") == 3);
    CHECK(error_line("[sweep]\nvariable = speed\n") == 2);
    CHECK(error_line("[sweep]\nvariable = beta\nbeta_db = 0\nengines = magic\n") == 4);
    CHECK(error_line("[sweep]\nvariable = x0\nbeta_db = 0\nvalues = 1, 50\n") == 4);
    CHECK(error_line("[sweep]\nbeta_db = 0\n") == 1);
    CHECK(error_line("[network]\nn_nodes = 3\n") == 0);  // no sweep at all
    CHECK(error_line(std::string(kMinimal) + "[sweep]\nname = base\nvariable = beta\nbeta_db = 0\n") > 0);
    try {
        parse("[network]\nbogus = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).rfind("test.cfg:2:", 0) == 0);
    }
}

TEST_CASE("csv round trip")
{
    ResultTable t;
    t.sweep_variable = "height";
    ResultRow r;
    r.sweep_value = 2;
    r.beta_db = -2.5;
    r.pc_exact = 0.123456789012345;
    r.pc_mc = 0.1;
    r.mc_ci = 1e-3;
    t.rows = {r, r};
    std::stringstream ss;
    write_csv(ss, t);
    const std::string text = ss.str();
    CHECK(text.rfind("sweep_height,beta_db,pc_exact,pc_clt,pc_lower,pc_upper,pc_mc,mc_ci,"
                     "pc_block_mix,pc_block_sim,block_ci\n",
                     0) == 0);
    const auto back = read_csv(ss, "mem");
    REQUIRE(back.rows.size() == 2);
    CHECK(back.sweep_variable == "height");
    CHECK(*back.rows[0].pc_exact == *r.pc_exact);
    CHECK_FALSE(back.rows[0].pc_clt.has_value());

    std::istringstream bad1("sweep_beta,beta_db\n");
    CHECK_THROWS_AS(read_csv(bad1, "mem"), CsvError);
    std::istringstream bad2(csv_header("beta") + "\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(bad2, "mem"), CsvError);
    std::istringstream bad3(csv_header("beta") + "\n1,2,x,,,,,,,,\n");
    CHECK_THROWS_AS(read_csv(bad3, "mem"), CsvError);
}

TEST_CASE("run_sweep fills only applicable engines")
{
    auto cfg = parse(std::string(kMinimal) + R"(
[sweep]
name = mixed
variable = m
values = 1, inf
beta_db = -3, 0
engines = exact, clt, bounds, mc
)");
    const auto t = run_sweep(cfg.sweeps[1]);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0].pc_exact.has_value());
    CHECK_FALSE(t.rows[0].pc_clt.has_value());
    CHECK_FALSE(t.rows[2].pc_exact.has_value());
    CHECK(t.rows[2].pc_clt.has_value());
    CHECK(*t.rows[2].pc_lower <= *t.rows[2].pc_clt);
    CHECK(*t.rows[2].pc_clt <= *t.rows[2].pc_upper);
    for (const auto& r : t.rows) CHECK(r.pc_mc.has_value());
}

TEST_CASE("svg: numbers round trip and series count")
{
    const auto dir = temp_dir("svg");
    const auto text = preset_text("fig3");
    REQUIRE(text.has_value());
    std::istringstream in{std::string(*text)};
    auto cfg = parse_config(in, "fig3");
    for (auto& sw : cfg.sweeps) sw.scenario.mc.trials = 2000;
    const auto written = run_experiment(cfg, dir);
    REQUIRE(written.size() == 1);
    const auto svg_path = dir / "fig3.svg";
    emit_plot(written[0], svg_path);
    std::ifstream svg_in(svg_path);
    std::stringstream svg;
    svg << svg_in.rdbuf();
    const std::string s = svg.str();

    std::ifstream csv_in(written[0]);
    const auto table = read_csv(csv_in, written[0].string());
    std::size_t expected = 0;
    for (const auto& r : table.rows) {
        for (auto cell : {r.pc_exact, r.pc_clt, r.pc_mc}) {
            if (!cell) continue;
            ++expected;
            std::ostringstream needle;
            needle << "x=" << format_number(r.beta_db) << " y=" << format_number(*cell)
                   << "</title>";
            CHECK(s.find(needle.str()) != std::string::npos);
        }
    }
    const std::regex title("<title>[a-z_]+ x=\\S+ y=\\S+</title>");
    CHECK(static_cast<std::size_t>(std::distance(
              std::sregex_iterator(s.begin(), s.end(), title), std::sregex_iterator())) ==
          expected);
    const std::regex series("class=\"series\"");
    CHECK(std::distance(std::sregex_iterator(s.begin(), s.end(), series),
                        std::sregex_iterator()) == 4);
    CHECK(s.find("m = inf") != std::string::npos);
}

TEST_CASE("svg: empty series is an error and nothing is written")
{
    const auto dir = temp_dir("empty");
    const auto csv = dir / "empty.csv";
    {
        std::ofstream out(csv);
        out << csv_header("beta") << "\n-5,-5,,,,,,,,,\n";
    }
    const auto svg = dir / "empty.svg";
    CHECK_THROWS_AS(emit_plot(csv, svg), PlotError);
    CHECK_FALSE(fs::exists(svg));
    const auto bad = dir / "bad.csv";
    {
        std::ofstream out(bad);
        out << "not,a,result\n";
    }
    CHECK_THROWS_AS(emit_plot(bad, svg), CsvError);
    CHECK_FALSE(fs::exists(svg));
}

TEST_CASE("presets parse")
{
    const auto names = preset_names();
    CHECK(names == std::vector<std::string>{"fig3", "fig4", "fig5", "fig6", "fig8"});
    for (const auto& n : names) {
        std::istringstream in{std::string(*preset_text(n))};
        CHECK_NOTHROW(parse_config(in, n));
    }
    CHECK_FALSE(preset_text("fig7").has_value());
}

TEST_CASE("golden files: presets with fixed seeds")
{
    const fs::path golden = fs::path(UAVCOV_SOURCE_DIR) / "tests" / "golden";
    const auto dir = temp_dir("golden");
    for (const auto& name : preset_names()) {
        std::istringstream in{std::string(*preset_text(name))};
        const auto written = run_experiment(parse_config(in, name), dir);
        for (const auto& path : written) {
            CAPTURE(path.filename().string());
            std::ifstream got_in(path), want_in(golden / path.filename());
            REQUIRE(want_in.good());
            const auto got = read_csv(got_in, path.string());
            const auto want = read_csv(want_in, (golden / path.filename()).string());
            REQUIRE(got.rows.size() == want.rows.size());
            for (std::size_t i = 0; i < got.rows.size(); ++i) {
                CHECK(got.rows[i].sweep_value == want.rows[i].sweep_value);
                CHECK(got.rows[i].beta_db == want.rows[i].beta_db);
                const auto g = got.rows[i].cells();
                const auto w = want.rows[i].cells();
                for (std::size_t c = 0; c < g.size(); ++c) {
                    REQUIRE(g[c].has_value() == w[c].has_value());
                    if (g[c]) CHECK(std::abs(*g[c] - *w[c]) <= 1e-9);
                }
            }
        }
    }
}
