#include "uavcov/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "uavcov/approx.hpp"
#include "uavcov/parallel.hpp"

namespace uavcov {

void BlockageScene::validate() const
{
    if (n_buildings < 0) throw std::invalid_argument("BlockageScene: n_buildings must be >= 0");
    if (!(building_width > 0.0) || !(building_depth > 0.0) || !(building_height > 0.0)) {
        throw std::invalid_argument("BlockageScene: building dimensions must be > 0");
    }
    if (!(region_radius >= 0.0)) {
        throw std::invalid_argument("BlockageScene: region_radius must be >= 0");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("BlockageScene: eta must lie in [0, 1]");
    }
}

std::vector<Building> sample_buildings(TrialRng& rng, const BlockageScene& scene,
                                       double region_radius, double x0)
{
    const double hw = 0.5 * scene.building_width;
    const double hd = 0.5 * scene.building_depth;
    std::vector<Building> out;
    out.reserve(static_cast<std::size_t>(scene.n_buildings));
    while (out.size() < static_cast<std::size_t>(scene.n_buildings)) {
        const double radius = region_radius * std::sqrt(rng.uniform());
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        const double cx = radius * std::cos(angle);
        const double cy = radius * std::sin(angle);
        if (std::abs(cx - x0) <= hw + kSlabTolerance && std::abs(cy) <= hd + kSlabTolerance) {
            continue;
        }
        out.push_back({cx - hw, cx + hw, cy - hd, cy + hd, scene.building_height});
    }
    return out;
}

bool segment_hits_building(const Point3& a, const Point3& b, const Building& box)
{
    const double lo[3] = {box.x_min - kSlabTolerance, box.y_min - kSlabTolerance,
                          -kSlabTolerance};
    const double hi[3] = {box.x_max + kSlabTolerance, box.y_max + kSlabTolerance,
                          box.height + kSlabTolerance};
    const double origin[3] = {a.x, a.y, a.z};
    const double dir[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
    double t0 = 0.0;
    double t1 = 1.0;
    for (int k = 0; k < 3; ++k) {
        if (dir[k] == 0.0) {
            if (origin[k] < lo[k] || origin[k] > hi[k]) return false;
            continue;
        }
        double ta = (lo[k] - origin[k]) / dir[k];
        double tb = (hi[k] - origin[k]) / dir[k];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

double BlockageSimulation::blocked_fraction() const
{
    return links == 0 ? 0.0 : static_cast<double>(blocked_links) / static_cast<double>(links);
}

namespace {

struct BlockageBatch
{
    std::vector<std::uint64_t> covered;
    std::vector<std::uint64_t> visible;
    std::uint64_t links = 0;
    std::uint64_t blocked = 0;
};

}  // namespace

BlockageSimulation simulate_blockage_grid(const NetworkConfig& config, double alpha,
                                          const BlockageScene& scene, double x0,
                                          std::span<const double> betas,
                                          const MonteCarloConfig& mc)
{
    config.validate();
    scene.validate();
    mc.validate();
    if (!(alpha > 2.0)) throw std::invalid_argument("simulate_blockage: alpha must be > 2");
    if (!(x0 >= 0.0 && x0 <= config.disk_radius)) {
        throw std::invalid_argument("simulate_blockage: x0 must lie in [0, r_a]");
    }
    for (double b : betas) {
        if (!(b > 0.0)) throw std::invalid_argument("simulate_blockage: beta must be > 0");
    }
    const std::vector<double> grid(betas.begin(), betas.end());
    const double region = scene.region_radius > 0.0 ? scene.region_radius : config.disk_radius;
    const auto n = static_cast<std::size_t>(config.n_nodes);
    const Point3 receiver{x0, 0.0, 0.0};

    auto batches = run_batches<BlockageBatch>(
        mc.trials, mc.batch_size, worker_count(mc.threads),
        [&](std::uint64_t, std::uint64_t first, std::uint64_t count) {
            BlockageBatch part;
            part.covered.assign(grid.size(), 0);
            part.visible.assign(n + 1, 0);
            std::vector<double> power(n);
            std::vector<double> dist(n);
            std::vector<char> blocked(n);
            for (std::uint64_t t = first; t < first + count; ++t) {
                TrialRng rng(mc.seed, t);
                const auto nodes = sample_network(rng, config);
                const auto buildings = sample_buildings(rng, scene, region, x0);
                std::size_t n_visible = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double dx = nodes[i].x - x0;
                    dist[i] = std::sqrt(dx * dx + nodes[i].y * nodes[i].y +
                                        nodes[i].z * nodes[i].z);
                    blocked[i] = std::any_of(buildings.begin(), buildings.end(),
                                             [&](const Building& bld) {
                                                 return segment_hits_building(receiver, nodes[i],
                                                                              bld);
                                             });
                    power[i] = std::pow(dist[i], -alpha) * (blocked[i] ? scene.eta : 1.0);
                    if (!blocked[i]) ++n_visible;
                }
                part.links += n;
                part.blocked += n - n_visible;
                ++part.visible[n_visible];

                std::size_t serving = n;
                for (std::size_t i = 0; i < n; ++i) {
                    if (scene.eta == 0.0 && blocked[i]) continue;
                    if (serving == n || dist[i] < dist[serving]) serving = i;
                }
                if (serving == n) continue;  // nothing visible
                double interference = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i != serving) interference += power[i];
                }
                const double sir = interference > 0.0
                                       ? power[serving] / interference
                                       : std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < grid.size(); ++k) {
                    if (sir > grid[k]) ++part.covered[k];
                }
            }
            return part;
        });

    BlockageSimulation out;
    std::vector<std::uint64_t> covered(grid.size(), 0);
    out.visible_histogram.assign(n + 1, 0);
    for (const auto& b : batches) {
        for (std::size_t k = 0; k < grid.size(); ++k) covered[k] += b.covered[k];
        for (std::size_t v = 0; v <= n; ++v) out.visible_histogram[v] += b.visible[v];
        out.links += b.links;
        out.blocked_links += b.blocked;
    }
    out.coverage.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double p = static_cast<double>(covered[k]) / static_cast<double>(mc.trials);
        out.coverage[k] = {p, binomial_ci_halfwidth(p, mc.trials), mc.trials, 0.0};
    }
    return out;
}

CoverageEstimate simulate_coverage_blockage_geometric(const NetworkConfig& config, double alpha,
                                                      const BlockageScene& scene, double x0,
                                                      double beta, const MonteCarloConfig& mc)
{
    const double grid[] = {beta};
    return simulate_blockage_grid(config, alpha, scene, x0, grid, mc).coverage.front();
}

CoverageEstimate coverage_blockage_independent(const NetworkConfig& config, double alpha,
                                               double x0, double beta, double p_block,
                                               const QuadratureSpec& spec)
{
    config.validate();
    if (!(p_block >= 0.0 && p_block <= 1.0)) {
        throw std::invalid_argument("coverage_blockage_independent: p_block must lie in [0, 1]");
    }
    const int n = config.n_nodes;
    const double p_visible = 1.0 - p_block;
    CoverageEstimate est;
    for (int nv = 1; nv <= n; ++nv) {
        // Binomial weight through lgamma to stay finite for large N.
        const double log_choose =
            std::lgamma(n + 1.0) - std::lgamma(nv + 1.0) - std::lgamma(n - nv + 1.0);
        double weight = 0.0;
        if (p_visible == 1.0) {
            weight = nv == n ? 1.0 : 0.0;
        } else if (p_visible > 0.0) {
            weight = std::exp(log_choose + nv * std::log(p_visible) +
                              (n - nv) * std::log1p(-p_visible));
        }
        if (weight == 0.0) continue;
        double pc = 1.0;
        if (nv >= 2) {
            NetworkConfig visible = config;
            visible.n_nodes = nv;
            const auto clt = coverage_clt(visible, alpha, x0, beta, spec);
            pc = clt.value;
            est.quad_error += weight * clt.quad_error;
        }
        est.value += weight * pc;
    }
    est.value = std::clamp(est.value, 0.0, 1.0);
    return est;
}

}  // namespace uavcov
