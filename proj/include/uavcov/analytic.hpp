#pragma once

#include <limits>
#include <vector>

#include "uavcov/coverage_estimate.hpp"
#include "uavcov/geometry.hpp"
#include "uavcov/quad.hpp"

namespace uavcov {

/// Fading shape sentinel for line-of-sight links without small-scale fading.
inline constexpr double kNoFading = std::numeric_limits<double>::infinity();

/// Largest serving-link shape the exact engine accepts. The derivative order
/// is m0 - 1; larger shapes belong to the no-fading approximations.
inline constexpr int kMaxServingShape = 10;

struct ChannelModel
{
    double alpha = 2.5;         // path-loss exponent, > 2
    double m_interferer = 1.0;  // Nakagami shape of interfering links, or kNoFading
    double m_serving = 1.0;     // Nakagami shape of the serving link (integer), or kNoFading

    bool no_fading() const;
    void validate() const;
};

/// Derivatives of the conditional interference Laplace transform at s:
/// values[k] = d^k/ds^k L_I(s | r, x0).
struct LaplaceDerivatives
{
    double s = 0.0;
    std::vector<double> values;
};

/// d^k/ds^k (1 + s u^-α / m)^-m, or d^k/ds^k exp(-s u^-α) when the
/// interferer shape is kNoFading.
double single_node_factor_derivative(int k, double s, double u, const ChannelModel& model);

/// L_I(s | r, x0) = g(s)^(N-1), g being the expected single-interferer
/// factor under the interferer-distance law conditioned on the serving
/// distance r.
double laplace_interference(const GeometryFrame& frame, int n_nodes, const ChannelModel& model,
                            double s, double r, const QuadratureSpec& spec = {});

/// Derivatives of L_I up to `max_order` (<= 9) at s.
LaplaceDerivatives laplace_derivatives(const GeometryFrame& frame, int n_nodes,
                                       const ChannelModel& model, double s, double r,
                                       int max_order, const QuadratureSpec& spec = {});

/// P(SIR > beta | R = r) for an integer serving shape m0:
/// sum_{k < m0} (-s)^k / k! * L_I^(k)(s) at s = m0 beta r^α.
double conditional_coverage_nakagami(const GeometryFrame& frame, int n_nodes,
                                     const ChannelModel& model, double beta, double r,
                                     const QuadratureSpec& spec = {});

/// Coverage probability under Nakagami fading, deconditioned over the
/// serving-distance density (split at w_m).
CoverageEstimate coverage_nakagami(const NetworkConfig& config, const ChannelModel& model,
                                   double x0, double beta, const QuadratureSpec& spec = {});

}  // namespace uavcov
