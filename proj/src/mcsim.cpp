#include "uavcov/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "uavcov/parallel.hpp"

namespace uavcov {

unsigned worker_count(unsigned requested)
{
    unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("COVERAGE_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) {
            n = std::min(n, static_cast<unsigned>(cap));
        }
    }
    return std::max(1u, n);
}

void MonteCarloConfig::validate() const
{
    if (trials < 1) throw std::invalid_argument("MonteCarloConfig: trials must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("MonteCarloConfig: batch_size must be >= 1");
}

std::vector<Point3> sample_network(TrialRng& rng, const NetworkConfig& config)
{
    std::vector<Point3> nodes(static_cast<std::size_t>(config.n_nodes));
    for (auto& p : nodes) {
        const double radius = config.disk_radius * std::sqrt(rng.uniform());
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        p = {radius * std::cos(angle), radius * std::sin(angle), config.altitude};
    }
    return nodes;
}

double sample_gamma_fading(TrialRng& rng, double m)
{
    if (std::isinf(m)) return 1.0;
    std::gamma_distribution<double> gamma(m, 1.0 / m);
    return gamma(rng);
}

double binomial_ci_halfwidth(double p, std::uint64_t trials)
{
    if (trials == 0) return 0.0;
    return 1.96 * std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

namespace {

std::vector<double> link_distances(const std::vector<Point3>& nodes, double x0)
{
    std::vector<double> w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double dx = nodes[i].x - x0;
        w[i] = std::sqrt(dx * dx + nodes[i].y * nodes[i].y + nodes[i].z * nodes[i].z);
    }
    return w;
}

// SIR of one realization, nearest-distance association.
double trial_sir(TrialRng& rng, const NetworkConfig& config, const ChannelModel& model, double x0)
{
    const auto nodes = sample_network(rng, config);
    const auto w = link_distances(nodes, x0);
    const auto serving =
        static_cast<std::size_t>(std::min_element(w.begin(), w.end()) - w.begin());
    double signal = 0.0;
    double interference = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double gain =
            sample_gamma_fading(rng, i == serving ? model.m_serving : model.m_interferer);
        const double power = gain * std::pow(w[i], -model.alpha);
        if (i == serving) {
            signal = power;
        } else {
            interference += power;
        }
    }
    if (interference == 0.0) return std::numeric_limits<double>::infinity();
    return signal / interference;
}

void check_sim_args(const NetworkConfig& config, const ChannelModel& model, double x0,
                    const MonteCarloConfig& mc)
{
    config.validate();
    model.validate();
    mc.validate();
    if (!(x0 >= 0.0 && x0 <= config.disk_radius)) {
        throw std::invalid_argument("simulate: x0 must lie in [0, r_a]");
    }
}

}  // namespace

std::vector<CoverageEstimate> simulate_coverage_grid(const NetworkConfig& config,
                                                     const ChannelModel& model, double x0,
                                                     std::span<const double> betas,
                                                     const MonteCarloConfig& mc)
{
    check_sim_args(config, model, x0, mc);
    for (double b : betas) {
        if (!(b > 0.0)) throw std::invalid_argument("simulate_coverage: beta must be > 0");
    }
    const std::vector<double> grid(betas.begin(), betas.end());
    auto batches = run_batches<std::vector<std::uint64_t>>(
        mc.trials, mc.batch_size, worker_count(mc.threads),
        [&](std::uint64_t, std::uint64_t first, std::uint64_t count) {
            std::vector<std::uint64_t> covered(grid.size(), 0);
            for (std::uint64_t t = first; t < first + count; ++t) {
                TrialRng rng(mc.seed, t);
                const double sir = trial_sir(rng, config, model, x0);
                for (std::size_t k = 0; k < grid.size(); ++k) {
                    if (sir > grid[k]) ++covered[k];
                }
            }
            return covered;
        });
    std::vector<std::uint64_t> total(grid.size(), 0);
    for (const auto& b : batches) {
        for (std::size_t k = 0; k < grid.size(); ++k) total[k] += b[k];
    }
    std::vector<CoverageEstimate> out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double p = static_cast<double>(total[k]) / static_cast<double>(mc.trials);
        out[k].value = p;
        out[k].ci_halfwidth = binomial_ci_halfwidth(p, mc.trials);
        out[k].trials = mc.trials;
    }
    return out;
}

CoverageEstimate simulate_coverage(const NetworkConfig& config, const ChannelModel& model,
                                   double x0, double beta, const MonteCarloConfig& mc)
{
    const double grid[] = {beta};
    return simulate_coverage_grid(config, model, x0, grid, mc).front();
}

std::vector<double> simulate_sir_db(const NetworkConfig& config, const ChannelModel& model,
                                    double x0, const MonteCarloConfig& mc)
{
    check_sim_args(config, model, x0, mc);
    auto batches = run_batches<std::vector<double>>(
        mc.trials, mc.batch_size, worker_count(mc.threads),
        [&](std::uint64_t, std::uint64_t first, std::uint64_t count) {
            std::vector<double> sir(count);
            for (std::uint64_t t = 0; t < count; ++t) {
                TrialRng rng(mc.seed, first + t);
                sir[t] = 10.0 * std::log10(trial_sir(rng, config, model, x0));
            }
            return sir;
        });
    std::vector<double> out;
    out.reserve(mc.trials);
    for (const auto& b : batches) out.insert(out.end(), b.begin(), b.end());
    return out;
}

SampleMoments sample_moments(std::span<const double> xs)
{
    SampleMoments m;
    m.count = xs.size();
    if (xs.empty()) return m;
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    m.mean = sum / n;
    // Second pass for the central moments and the spread of their summands.
    double s2 = 0.0, s3 = 0.0, s4 = 0.0, s6 = 0.0;
    for (double x : xs) {
        const double d = x - m.mean;
        const double d2 = d * d;
        const double a3 = std::abs(d) * d2;
        s2 += d2;
        s3 += a3;
        s4 += d2 * d2;
        s6 += a3 * a3;
    }
    m.variance = xs.size() > 1 ? s2 / (n - 1.0) : 0.0;
    m.mean_se = std::sqrt(m.variance / n);
    m.third_abs = s3 / n;
    const double var_of_sq = std::max(0.0, s4 / n - (s2 / n) * (s2 / n));
    const double var_of_cube = std::max(0.0, s6 / n - m.third_abs * m.third_abs);
    m.variance_se = std::sqrt(var_of_sq / n);
    m.third_abs_se = std::sqrt(var_of_cube / n);
    return m;
}

double ConditionalStatistics::acceptance_rate() const
{
    return attempted == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempted);
}

ConditionalStatistics conditional_statistics(const NetworkConfig& config,
                                             const ChannelModel& model, double x0,
                                             const MonteCarloConfig& mc, Interval r_bin,
                                             Interval u1_bin, double s)
{
    check_sim_args(config, model, x0, mc);
    if (config.n_nodes < 2) {
        throw std::invalid_argument("conditional_statistics: needs n_nodes >= 2");
    }
    if (!(r_bin.lo <= r_bin.hi) || !(u1_bin.lo <= u1_bin.hi)) {
        throw std::invalid_argument("conditional_statistics: bins must satisfy lo <= hi");
    }

    auto batches = run_batches<ConditionalStatistics>(
        mc.trials, mc.batch_size, worker_count(mc.threads),
        [&](std::uint64_t, std::uint64_t first, std::uint64_t count) {
            ConditionalStatistics part;
            for (std::uint64_t t = first; t < first + count; ++t) {
                TrialRng rng(mc.seed, t);
                const auto w = link_distances(sample_network(rng, config), x0);
                const auto ordered = order_distances(w);
                if (!r_bin.contains(ordered.serving) || !u1_bin.contains(ordered.dominant)) {
                    continue;
                }
                ++part.accepted;
                part.serving.push_back(ordered.serving);
                part.dominant.push_back(ordered.dominant);
                double residual = 0.0;
                for (double u : ordered.residual) {
                    part.residual_distances.push_back(u);
                    residual += std::pow(u, -model.alpha);
                }
                part.residual_power.push_back(residual);
                double interference =
                    sample_gamma_fading(rng, model.m_interferer) *
                    std::pow(ordered.dominant, -model.alpha);
                for (double u : ordered.residual) {
                    interference +=
                        sample_gamma_fading(rng, model.m_interferer) * std::pow(u, -model.alpha);
                }
                part.laplace_samples.push_back(std::exp(-s * interference));
            }
            return part;
        });

    ConditionalStatistics out;
    out.attempted = mc.trials;
    for (auto& b : batches) {
        out.accepted += b.accepted;
        auto append = [](std::vector<double>& dst, const std::vector<double>& src) {
            dst.insert(dst.end(), src.begin(), src.end());
        };
        append(out.serving, b.serving);
        append(out.dominant, b.dominant);
        append(out.residual_distances, b.residual_distances);
        append(out.residual_power, b.residual_power);
        append(out.laplace_samples, b.laplace_samples);
    }
    if (out.acceptance_rate() < 1e-4) {
        std::ostringstream msg;
        msg << "conditional_statistics: acceptance rate " << out.acceptance_rate()
            << " below 1e-4 (" << out.accepted << " of " << out.attempted
            << " trials); widen the bins";
        throw std::runtime_error(msg.str());
    }
    std::vector<double> terms(out.residual_distances.size());
    std::transform(out.residual_distances.begin(), out.residual_distances.end(), terms.begin(),
                   [&](double u) { return std::pow(u, -model.alpha); });
    out.residual = sample_moments(out.residual_power);
    out.residual_terms = sample_moments(terms);
    out.laplace = sample_moments(out.laplace_samples);
    return out;
}

}  // namespace uavcov
