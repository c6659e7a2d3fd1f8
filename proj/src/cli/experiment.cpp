#include "uavcov/cli/experiment.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "uavcov/analytic.hpp"
#include "uavcov/approx.hpp"
#include "uavcov/blockage.hpp"
#include "uavcov/mcsim.hpp"
#include "uavcov/parallel.hpp"

namespace uavcov::cli {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

bool exact_applies(const ChannelModel& ch)
{
    return std::isfinite(ch.m_serving) && ch.m_serving <= kMaxServingShape;
}

struct AnalyticCells
{
    Cell exact, clt, lower, upper;
};

AnalyticCells analytic_point(const Sweep& sweep, const Scenario& s, double beta)
{
    AnalyticCells out;
    if (sweep.wants(Engine::exact) && exact_applies(s.channel)) {
        out.exact = coverage_nakagami(s.network, s.channel, s.x0, beta, s.quadrature).value;
    }
    if (!s.channel.no_fading()) return out;
    const bool want_bounds = sweep.wants(Engine::bounds);
    if (want_bounds && s.network.n_nodes >= 3) {
        const auto b =
            coverage_bounds(s.network, s.channel.alpha, s.x0, beta, kBerryEsseenConstant,
                            s.quadrature);
        out.lower = b.lower;
        out.upper = b.upper;
        if (sweep.wants(Engine::clt)) out.clt = b.clt;
        return out;
    }
    if (sweep.wants(Engine::clt) || want_bounds) {
        const double v = coverage_clt(s.network, s.channel.alpha, s.x0, beta, s.quadrature).value;
        if (sweep.wants(Engine::clt)) out.clt = v;
        if (want_bounds) out.lower = out.upper = v;  // N <= 2: no residual interference
    }
    return out;
}

}  // namespace

ResultTable run_sweep(const Sweep& sweep)
{
    ResultTable table;
    table.sweep_variable = to_string(sweep.variable);
    const std::size_t n_beta = sweep.beta_db.size();
    const std::size_t n_points = sweep.values.size() * n_beta;
    table.rows.resize(n_points);

    std::vector<Scenario> scenarios;
    for (double v : sweep.values) {
        scenarios.push_back(apply_sweep_value(sweep.scenario, sweep.variable, v));
    }
    std::vector<double> betas;
    for (double db : sweep.beta_db) betas.push_back(db_to_linear(db));

    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        for (std::size_t k = 0; k < n_beta; ++k) {
            auto& row = table.rows[i * n_beta + k];
            row.sweep_value = sweep.variable == SweepVariable::beta ? sweep.beta_db[k]
                                                                    : sweep.values[i];
            row.beta_db = sweep.beta_db[k];
        }
    }

    // Analytic points are independent; spread them over the workers.
    const bool any_analytic = sweep.wants(Engine::exact) || sweep.wants(Engine::clt) ||
                              sweep.wants(Engine::bounds);
    if (any_analytic) {
        const auto cells = run_batches<AnalyticCells>(
            n_points, 1, worker_count(), [&](std::uint64_t p, std::uint64_t, std::uint64_t) {
                return analytic_point(sweep, scenarios[p / n_beta], betas[p % n_beta]);
            });
        for (std::size_t p = 0; p < n_points; ++p) {
            auto& row = table.rows[p];
            row.pc_exact = cells[p].exact;
            row.pc_clt = cells[p].clt;
            row.pc_lower = cells[p].lower;
            row.pc_upper = cells[p].upper;
        }
    }

    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const Scenario& s = scenarios[i];
        if (sweep.wants(Engine::mc)) {
            const auto est = simulate_coverage_grid(s.network, s.channel, s.x0, betas, s.mc);
            for (std::size_t k = 0; k < n_beta; ++k) {
                table.rows[i * n_beta + k].pc_mc = est[k].value;
                table.rows[i * n_beta + k].mc_ci = est[k].ci_halfwidth;
            }
        }
        if (sweep.wants(Engine::blockage) && s.channel.no_fading()) {
            const auto sim =
                simulate_blockage_grid(s.network, s.channel.alpha, s.blockage, s.x0, betas, s.mc);
            const double p_block = s.p_block >= 0.0 ? s.p_block : sim.blocked_fraction();
            for (std::size_t k = 0; k < n_beta; ++k) {
                auto& row = table.rows[i * n_beta + k];
                row.pc_block_sim = sim.coverage[k].value;
                row.block_ci = sim.coverage[k].ci_halfwidth;
                row.pc_block_mix = coverage_blockage_independent(s.network, s.channel.alpha, s.x0,
                                                                 betas[k], p_block, s.quadrature)
                                       .value;
            }
        }
    }
    return table;
}

std::vector<std::filesystem::path> run_experiment(
    const ExperimentConfig& config, const std::optional<std::filesystem::path>& output_dir)
{
    std::vector<ResultTable> tables;
    for (const auto& sweep : config.sweeps) tables.push_back(run_sweep(sweep));

    const std::filesystem::path dir = output_dir ? *output_dir : std::filesystem::path(config.output_dir);
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const auto path = dir / (config.output_prefix + config.sweeps[i].name + ".csv");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        write_csv(out, tables[i]);
        if (!out) throw std::runtime_error("error writing " + path.string());
        written.push_back(path);
    }
    return written;
}

}  // namespace uavcov::cli
