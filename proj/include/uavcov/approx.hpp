#pragma once

#include "uavcov/coverage_estimate.hpp"
#include "uavcov/geometry.hpp"
#include "uavcov/quad.hpp"

namespace uavcov {

/// Berry-Esseen constant used by coverage_bounds.
inline constexpr double kBerryEsseenConstant = 0.4748;

/// Conditional moments of the residual interference I_{N-2}, the sum of
/// V_i = U_i^-α over the N - 2 interferers beyond the dominant one, given
/// the serving and dominant distances. Units are powers of m^-α.
struct ResidualMoments
{
    double mean_per_term = 0.0;
    double mean_total = 0.0;
    double variance_per_term = 0.0;
    double variance_total = 0.0;
    double third_abs_moment_per_term = 0.0;  // E|V_i - E V_i|^3
};

/// Mean fields only. For u1 <= w_m the inner piece is integrated in closed
/// form and the outer piece by quadrature. Requires n_nodes >= 3.
ResidualMoments residual_mean(const GeometryFrame& frame, int n_nodes, double alpha, double r,
                              double u1);

/// Var[I_{N-2} | r, u1] = (N - 2) Var[V_i].
double residual_variance(const GeometryFrame& frame, int n_nodes, double alpha, double r,
                         double u1);

/// E|V_i - E V_i|^3 per term, integrated in the distance variable with the
/// kink at u = (E V_i)^(-1/α) as a breakpoint.
double residual_third_abs_moment(const GeometryFrame& frame, int n_nodes, double alpha, double r,
                                 double u1);

/// All fields in one go.
ResidualMoments residual_moments(const GeometryFrame& frame, int n_nodes, double alpha, double r,
                                 double u1);

struct CoverageBounds
{
    double lower = 0.0;  // clamped to [0, 1]
    double upper = 0.0;
    double lower_unclamped = 0.0;
    double upper_unclamped = 0.0;
    double clt = 0.0;
    double quad_error = 0.0;

    double width_unclamped() const { return upper_unclamped - lower_unclamped; }
};

/// No-fading coverage with the dominant interferer handled exactly and the
/// residual interference replaced by a Gaussian. N = 1 gives 1 and N = 2 is
/// evaluated exactly (no residual interferers).
CoverageEstimate coverage_clt(const NetworkConfig& config, double alpha, double x0, double beta,
                              const QuadratureSpec& spec = {});

/// Berry-Esseen sandwich around coverage_clt. Requires n_nodes >= 3.
CoverageBounds coverage_bounds(const NetworkConfig& config, double alpha, double x0, double beta,
                               double berry_esseen_constant = kBerryEsseenConstant,
                               const QuadratureSpec& spec = {});

namespace origin {

/// Closed-form residual mean and variance (totals, including the N - 2
/// factor) for a receiver at the origin.
double residual_mean_total(double disk_radius, double altitude, int n_nodes, double alpha,
                           double u1);
double residual_variance_total(double disk_radius, double altitude, int n_nodes, double alpha,
                               double u1);

}  // namespace origin

}  // namespace uavcov
