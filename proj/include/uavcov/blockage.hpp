#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavcov/coverage_estimate.hpp"
#include "uavcov/geometry.hpp"
#include "uavcov/mcsim.hpp"
#include "uavcov/quad.hpp"

namespace uavcov {

/// Axis-aligned buildings with centers uniform in a disk around the origin.
/// Links through a building have their power scaled by eta (0: lost).
struct BlockageScene
{
    int n_buildings = 50;
    double building_width = 50.0;   // along x, m
    double building_depth = 50.0;   // along y, m
    double building_height = 150.0; // m
    double region_radius = 0.0;     // m; 0 means the transmitter disk radius
    double eta = 0.0;

    void validate() const;
};

struct Building
{
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
    double height = 0.0;
};

inline constexpr double kSlabTolerance = 1e-9;  // m

/// One building population. Buildings whose footprint covers the receiver
/// at (x0, 0) are redrawn.
std::vector<Building> sample_buildings(TrialRng& rng, const BlockageScene& scene,
                                       double region_radius, double x0);

/// True when the segment a-b passes through the box (slab test, boxes grown
/// by kSlabTolerance).
bool segment_hits_building(const Point3& a, const Point3& b, const Building& box);

struct BlockageSimulation
{
    std::vector<CoverageEstimate> coverage;  // one per threshold
    std::uint64_t links = 0;
    std::uint64_t blocked_links = 0;
    std::vector<std::uint64_t> visible_histogram;  // index: number of visible nodes

    double blocked_fraction() const;
};

/// Geometric blockage simulation without fading. With eta = 0 the receiver
/// connects to the nearest visible node and trials with no visible node are
/// not covered; with eta > 0 it keeps the nearest node and blocked powers
/// are attenuated.
BlockageSimulation simulate_blockage_grid(const NetworkConfig& config, double alpha,
                                          const BlockageScene& scene, double x0,
                                          std::span<const double> betas,
                                          const MonteCarloConfig& mc);

CoverageEstimate simulate_coverage_blockage_geometric(const NetworkConfig& config, double alpha,
                                                      const BlockageScene& scene, double x0,
                                                      double beta, const MonteCarloConfig& mc);

/// Binomial mixture over the visible count n_v ~ Bin(N, 1 - p_block) of the
/// no-fading dominant-interferer coverage with n_v nodes; n_v = 0 gives 0 and
/// n_v = 1 gives 1.
CoverageEstimate coverage_blockage_independent(const NetworkConfig& config, double alpha,
                                               double x0, double beta, double p_block,
                                               const QuadratureSpec& spec = {});

}  // namespace uavcov
