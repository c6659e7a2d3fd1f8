#include "uavcov/cli/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace uavcov::cli {

namespace {

std::string location(const std::string& source, int line)
{
    return line > 0 ? source + ":" + std::to_string(line) : source;
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Entry
{
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

struct SweepBlock
{
    int line = 0;
    std::vector<Entry> entries;
};

class Parser
{
public:
    explicit Parser(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(int line, const std::string& message) const
    {
        throw ConfigError(source_, line, message);
    }

    double number(const Entry& e) const
    {
        try {
            return parse_number(e.value);
        } catch (const std::invalid_argument&) {
            fail(e.line, e.section + "." + e.key + ": expected a number, got '" + e.value + "'");
        }
    }

    double finite(const Entry& e) const
    {
        const double v = number(e);
        if (!std::isfinite(v)) fail(e.line, e.section + "." + e.key + ": must be finite");
        return v;
    }

    double positive(const Entry& e) const
    {
        const double v = finite(e);
        if (!(v > 0.0)) fail(e.line, e.section + "." + e.key + ": must be > 0");
        return v;
    }

    std::uint64_t integer(const Entry& e, double min_value) const
    {
        const double v = finite(e);
        if (std::floor(v) != v || v < min_value || v > 1.8e19) {
            std::ostringstream msg;
            msg << e.section << "." << e.key << ": expected an integer >= " << min_value
                << ", got '" << e.value << "'";
            fail(e.line, msg.str());
        }
        return static_cast<std::uint64_t>(v);
    }

    void apply(Scenario& s, const Entry& e) const
    {
        const std::string& k = e.key;
        if (e.section == "network") {
            if (k == "n_nodes") return void(s.network.n_nodes = static_cast<int>(integer(e, 1)));
            if (k == "disk_radius_km") return void(s.network.disk_radius = positive(e) * 1e3);
            if (k == "altitude_km") return void(s.network.altitude = positive(e) * 1e3);
        } else if (e.section == "channel") {
            if (k == "alpha") return void(s.channel.alpha = finite(e));
            if (k == "m") return void(s.channel.m_interferer = number(e));
            if (k == "m0") return void(s.channel.m_serving = number(e));
        } else if (e.section == "receiver") {
            if (k == "x0_km") {
                const double v = finite(e);
                if (v < 0.0) fail(e.line, "receiver.x0_km: must be >= 0");
                return void(s.x0 = v * 1e3);
            }
        } else if (e.section == "mc") {
            if (k == "trials") return void(s.mc.trials = integer(e, 1));
            if (k == "seed") return void(s.mc.seed = integer(e, 0));
            if (k == "batch_size") return void(s.mc.batch_size = integer(e, 1));
            if (k == "threads") return void(s.mc.threads = static_cast<unsigned>(integer(e, 0)));
        } else if (e.section == "blockage") {
            if (k == "n_buildings") {
                return void(s.blockage.n_buildings = static_cast<int>(integer(e, 0)));
            }
            if (k == "width_m") return void(s.blockage.building_width = positive(e));
            if (k == "depth_m") return void(s.blockage.building_depth = positive(e));
            if (k == "height_m") return void(s.blockage.building_height = positive(e));
            if (k == "region_radius_km") return void(s.blockage.region_radius = positive(e) * 1e3);
            if (k == "eta") {
                const double v = finite(e);
                if (v < 0.0 || v > 1.0) fail(e.line, "blockage.eta: must lie in [0, 1]");
                return void(s.blockage.eta = v);
            }
            if (k == "p_block") {
                const double v = finite(e);
                if (v < 0.0 || v > 1.0) fail(e.line, "blockage.p_block: must lie in [0, 1]");
                return void(s.p_block = v);
            }
        } else if (e.section == "quadrature") {
            if (k == "abs_tol") return void(s.quadrature.abs_tol = finite(e));
            if (k == "rel_tol") return void(s.quadrature.rel_tol = finite(e));
            if (k == "max_subdivisions") {
                return void(s.quadrature.max_subdivisions = static_cast<int>(integer(e, 1)));
            }
        }
        fail(e.line, "unknown key '" + k + "' in [" + e.section + "]");
    }

    void check(const Scenario& s, int line, const std::string& what) const
    {
        try {
            s.network.validate();
            s.channel.validate();
            s.mc.validate();
            s.blockage.validate();
            s.quadrature.validate();
        } catch (const std::invalid_argument& err) {
            fail(line, what + ": " + err.what());
        }
        if (s.x0 > s.network.disk_radius) {
            fail(line, what + ": receiver x0 lies outside the transmitter disk");
        }
    }

    std::vector<double> beta_grid(const Entry& e) const
    {
        std::vector<double> out;
        if (e.value.find(':') != std::string::npos) {
            const auto parts = split(e.value, ':');
            if (parts.size() != 3) fail(e.line, "sweep.beta_db: range must be start:step:stop");
            Entry part = e;
            std::array<double, 3> r{};
            for (std::size_t i = 0; i < 3; ++i) {
                part.value = parts[i];
                r[i] = finite(part);
            }
            if (!(r[1] > 0.0) || r[2] < r[0]) {
                fail(e.line, "sweep.beta_db: range needs step > 0 and stop >= start");
            }
            const auto n = static_cast<long>(std::floor((r[2] - r[0]) / r[1] + 1e-9)) + 1;
            for (long i = 0; i < n; ++i) out.push_back(r[0] + static_cast<double>(i) * r[1]);
        } else {
            Entry part = e;
            for (const auto& item : split(e.value, ',')) {
                part.value = item;
                out.push_back(finite(part));
            }
        }
        if (out.empty()) fail(e.line, "sweep.beta_db: empty threshold grid");
        for (std::size_t i = 1; i < out.size(); ++i) {
            if (!(out[i] > out[i - 1])) {
                fail(e.line, "sweep.beta_db: thresholds must be strictly increasing");
            }
        }
        return out;
    }

    Sweep sweep(const SweepBlock& block, const Scenario& base, std::size_t index) const
    {
        Sweep sw;
        sw.line = block.line;
        sw.scenario = base;
        sw.name = "sweep" + std::to_string(index + 1);
        bool have_variable = false;
        bool have_beta = false;
        const Entry* values_entry = nullptr;
        for (const auto& e : block.entries) {
            if (e.key == "name") {
                if (e.value.empty() ||
                    e.value.find_first_of("/\\ \t") != std::string::npos) {
                    fail(e.line, "sweep.name: must be non-empty without spaces or slashes");
                }
                sw.name = e.value;
            } else if (e.key == "variable") {
                static const std::map<std::string, SweepVariable> names = {
                    {"beta", SweepVariable::beta},   {"height", SweepVariable::height},
                    {"x0", SweepVariable::x0},       {"m", SweepVariable::m},
                    {"alpha", SweepVariable::alpha}, {"n_nodes", SweepVariable::n_nodes}};
                const auto it = names.find(lower(e.value));
                if (it == names.end()) {
                    fail(e.line, "sweep.variable: expected one of beta, height, x0, m, alpha, "
                                 "n_nodes; got '" + e.value + "'");
                }
                sw.variable = it->second;
                have_variable = true;
            } else if (e.key == "values") {
                values_entry = &e;
            } else if (e.key == "beta_db") {
                sw.beta_db = beta_grid(e);
                have_beta = true;
            } else if (e.key == "engines") {
                static const std::map<std::string, Engine> names = {
                    {"exact", Engine::exact}, {"clt", Engine::clt}, {"bounds", Engine::bounds},
                    {"mc", Engine::mc},       {"blockage", Engine::blockage}};
                sw.engines.clear();
                for (const auto& item : split(e.value, ',')) {
                    const auto it = names.find(lower(item));
                    if (it == names.end()) {
                        fail(e.line, "sweep.engines: unknown engine '" + item +
                                         "' (expected exact, clt, bounds, mc, blockage)");
                    }
                    if (!sw.wants(it->second)) sw.engines.push_back(it->second);
                }
                if (sw.engines.empty()) fail(e.line, "sweep.engines: no engine given");
            } else if (const auto dot = e.key.find('.'); dot != std::string::npos) {
                Entry inner = e;
                inner.section = e.key.substr(0, dot);
                inner.key = e.key.substr(dot + 1);
                apply(sw.scenario, inner);
            } else {
                fail(e.line, "unknown key '" + e.key + "' in [sweep]");
            }
        }
        if (!have_variable) fail(block.line, "[sweep] needs 'variable'");
        if (!have_beta) fail(block.line, "[sweep] needs 'beta_db'");
        if (sw.engines.empty()) sw.engines = {Engine::exact, Engine::mc};

        if (sw.variable == SweepVariable::beta) {
            if (values_entry != nullptr) {
                fail(values_entry->line, "sweep.values: not used when variable = beta "
                                         "(the thresholds come from beta_db)");
            }
            sw.values = {0.0};
        } else {
            if (values_entry == nullptr) fail(block.line, "[sweep] needs 'values'");
            Entry part = *values_entry;
            for (const auto& item : split(values_entry->value, ',')) {
                part.value = item;
                sw.values.push_back(number(part));
            }
            if (sw.values.empty()) fail(values_entry->line, "sweep.values: empty list");
        }
        const int value_line = values_entry != nullptr ? values_entry->line : block.line;
        check(sw.scenario, block.line, "sweep '" + sw.name + "'");
        for (double v : sw.values) {
            Scenario s;
            try {
                s = apply_sweep_value(sw.scenario, sw.variable, v);
            } catch (const std::invalid_argument& err) {
                fail(value_line, "sweep.values: " + std::string(err.what()));
            }
            std::ostringstream what;
            what << "sweep '" << sw.name << "' at " << to_string(sw.variable) << " = " << v;
            check(s, value_line, what.str());
        }
        return sw;
    }

private:
    std::string source_;
};

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(location(source, line) + ": " + message), line_(line)
{
}

std::string to_string(SweepVariable v)
{
    switch (v) {
    case SweepVariable::beta: return "beta";
    case SweepVariable::height: return "height";
    case SweepVariable::x0: return "x0";
    case SweepVariable::m: return "m";
    case SweepVariable::alpha: return "alpha";
    case SweepVariable::n_nodes: return "n_nodes";
    }
    return "?";
}

std::string to_string(Engine e)
{
    switch (e) {
    case Engine::exact: return "exact";
    case Engine::clt: return "clt";
    case Engine::bounds: return "bounds";
    case Engine::mc: return "mc";
    case Engine::blockage: return "blockage";
    }
    return "?";
}

bool Sweep::wants(Engine e) const
{
    return std::find(engines.begin(), engines.end(), e) != engines.end();
}

double parse_number(const std::string& text)
{
    const std::string t = lower(trim(text));
    if (t == "inf" || t == "infinity" || t == "+inf") return kNoFading;
    if (t.empty() || t.find("nan") != std::string::npos) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    return v;
}

Scenario apply_sweep_value(const Scenario& base, SweepVariable variable, double value)
{
    Scenario s = base;
    switch (variable) {
    case SweepVariable::beta: break;
    case SweepVariable::height: s.network.altitude = value * 1e3; break;
    case SweepVariable::x0: s.x0 = value * 1e3; break;
    case SweepVariable::m:
        s.channel.m_interferer = value;
        s.channel.m_serving = value;
        break;
    case SweepVariable::alpha: s.channel.alpha = value; break;
    case SweepVariable::n_nodes:
        if (std::floor(value) != value || value < 1.0) {
            throw std::invalid_argument("n_nodes values must be positive integers");
        }
        s.network.n_nodes = static_cast<int>(value);
        break;
    }
    if ((variable == SweepVariable::height || variable == SweepVariable::x0) &&
        !std::isfinite(value)) {
        throw std::invalid_argument("distances must be finite");
    }
    return s;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source_name)
{
    Parser parser(source_name);
    static const std::vector<std::string> sections = {"network", "channel",  "receiver",
                                                      "mc",      "blockage", "quadrature",
                                                      "output",  "sweep"};
    std::vector<Entry> base_entries;
    std::vector<SweepBlock> sweeps;
    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto comment = raw.find_first_of("#;");
        const std::string text = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') parser.fail(line, "malformed section header '" + text + "'");
            section = lower(trim(text.substr(1, text.size() - 2)));
            if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
                parser.fail(line, "unknown section [" + section + "]");
            }
            if (section == "sweep") sweeps.push_back({line, {}});
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) parser.fail(line, "expected 'key = value', got '" + text + "'");
        if (section.empty()) parser.fail(line, "key outside of any section");
        Entry e{section, lower(trim(text.substr(0, eq))), trim(text.substr(eq + 1)), line};
        if (e.key.empty()) parser.fail(line, "empty key");
        if (section == "sweep") {
            sweeps.back().entries.push_back(std::move(e));
        } else {
            base_entries.push_back(std::move(e));
        }
    }

    ExperimentConfig cfg;
    for (const auto& e : base_entries) {
        if (e.section == "output") {
            if (e.key == "dir") {
                cfg.output_dir = e.value;
            } else if (e.key == "prefix") {
                cfg.output_prefix = e.value;
            } else {
                parser.fail(e.line, "unknown key '" + e.key + "' in [output]");
            }
            continue;
        }
        parser.apply(cfg.base, e);
    }
    if (sweeps.empty()) parser.fail(0, "no [sweep] section");
    for (std::size_t i = 0; i < sweeps.size(); ++i) {
        cfg.sweeps.push_back(parser.sweep(sweeps[i], cfg.base, i));
        for (std::size_t j = 0; j < i; ++j) {
            if (cfg.sweeps[j].name == cfg.sweeps[i].name) {
                parser.fail(sweeps[i].line, "duplicate sweep name '" + cfg.sweeps[i].name + "'");
            }
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
    return parse_config(in, path.string());
}

}  // namespace uavcov::cli
