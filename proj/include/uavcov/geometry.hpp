#pragma once

#include <span>
#include <vector>

namespace uavcov {

/// Transmitters are placed uniformly on a disk of radius `disk_radius`
/// centred above the origin at height `altitude`. Lengths are in meters.
struct NetworkConfig
{
    int n_nodes = 1;
    double disk_radius = 0.0;
    double altitude = 0.0;

    /// Throws std::invalid_argument when n_nodes < 1, disk_radius <= 0 or
    /// altitude < 0.
    void validate() const;
};

/// Receiver position on the ground (distance x0 from the origin) together
/// with the breakpoints of the piecewise link-distance law.
///
/// Link distances in [altitude, w_m] belong to the inner piece where the disk
/// of ground radius sqrt(w^2 - h^2) around the receiver lies entirely inside
/// the transmitter footprint; (w_m, w_p] is the partially overlapping piece.
struct GeometryFrame
{
    double x0 = 0.0;
    double disk_radius = 0.0;
    double altitude = 0.0;
    double d = 0.0;    // sqrt(r_a^2 + h^2), distance to the disk rim from the origin
    double w_m = 0.0;  // sqrt((r_a - x0)^2 + h^2)
    double w_p = 0.0;  // sqrt((r_a + x0)^2 + h^2)
    double s_m = 0.0;  // r_a - x0
    double s_p = 0.0;  // r_a + x0

    bool inner_piece(double w) const { return w <= w_m; }
};

/// Ordered distances of one network realization: serving (nearest), dominant
/// interferer (second nearest) and the remaining interferers in ascending
/// order.
struct DistanceTriple
{
    double serving = 0.0;
    double dominant = 0.0;
    std::vector<double> residual;
};

/// Tolerance on |arccos argument| - 1 before a domain error is raised. The
/// effective bound also admits the rounding error of the argument itself.
inline constexpr double kAcosTolerance = 1e-12;

GeometryFrame make_frame(const NetworkConfig& config, double x0);

double cdf_link_distance(const GeometryFrame& frame, double w);
double ccdf_link_distance(const GeometryFrame& frame, double w);
double pdf_link_distance(const GeometryFrame& frame, double w);

double pdf_serving_distance(const GeometryFrame& frame, int n_nodes, double r);
double pdf_interferer_given_serving(const GeometryFrame& frame, double r, double u);
double joint_pdf_serving_dominant(const GeometryFrame& frame, int n_nodes, double r, double u1);
double pdf_residual_interferer(const GeometryFrame& frame, double r, double u1, double u);

/// Marginal density of the dominant-interferer distance U1 = W_(2).
double pdf_dominant_distance(const GeometryFrame& frame, int n_nodes, double u1);

/// Sorts `distances` (size >= 2) into serving / dominant / residual.
DistanceTriple order_distances(std::span<const double> distances);

// Closed forms for a receiver at the origin (x0 = 0). These are independent
// of the piecewise machinery above and serve as its reference.
namespace origin {

double cdf_link_distance(double disk_radius, double altitude, double w);
double pdf_link_distance(double disk_radius, double altitude, double w);
double pdf_serving_distance(double disk_radius, double altitude, int n_nodes, double r);
double pdf_interferer_given_serving(double disk_radius, double altitude, double r, double u);
double joint_pdf_serving_dominant(double disk_radius, double altitude, int n_nodes, double r,
                                  double u1);
double pdf_residual_interferer(double disk_radius, double altitude, double u1, double u);

}  // namespace origin

}  // namespace uavcov
