#include "uavcov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace uavcov {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// arccos with the argument clamped onto [-1, 1]. `magnitude` bounds the sum of
// absolute values of the terms that produced `arg`, so the admissible overshoot
// covers the argument's own rounding error.
double clamped_acos(double arg, double magnitude)
{
    const double slack = kAcosTolerance + 8.0 * kEps * magnitude;
    if (arg > 1.0) {
        if (arg - 1.0 > slack) {
            std::ostringstream msg;
            msg << "arccos argument " << arg << " exceeds 1 beyond tolerance";
            throw std::domain_error(msg.str());
        }
        return 0.0;
    }
    if (arg < -1.0) {
        if (-1.0 - arg > slack) {
            std::ostringstream msg;
            msg << "arccos argument " << arg << " below -1 beyond tolerance";
            throw std::domain_error(msg.str());
        }
        return std::numbers::pi;
    }
    return std::acos(arg);
}

// Half-angle at the receiver of the lens b(x, s) ∩ b(o, r_a).
double receiver_angle(const GeometryFrame& f, double s)
{
    if (s <= 0.0) {
        // Only reachable for x0 == r_a, where the argument tends to 0.
        return std::numbers::pi / 2.0;
    }
    const double ra = f.disk_radius;
    const double denom = 2.0 * f.x0 * s;
    const double num = (s - ra) * (s + ra) + f.x0 * f.x0;
    const double magnitude = (s * s + ra * ra + f.x0 * f.x0) / denom;
    return clamped_acos(num / denom, magnitude);
}

// Half-angle at the disk centre of the same lens.
double centre_angle(const GeometryFrame& f, double s)
{
    const double ra = f.disk_radius;
    const double denom = 2.0 * f.x0 * ra;
    const double num = (ra - s) * (ra + s) + f.x0 * f.x0;
    const double magnitude = (s * s + ra * ra + f.x0 * f.x0) / denom;
    return clamped_acos(num / denom, magnitude);
}

double ground_offset(const GeometryFrame& f, double w)
{
    const double h = f.altitude;
    return std::sqrt(std::max(0.0, (w - h) * (w + h)));
}

double cdf_inner(const GeometryFrame& f, double w)
{
    const double h = f.altitude;
    return (w - h) * (w + h) / (f.disk_radius * f.disk_radius);
}

double cdf_outer(const GeometryFrame& f, double w)
{
    const double s = ground_offset(f, w);
    const double theta = receiver_angle(f, s);
    const double phi = centre_angle(f, s);
    const double ra2 = f.disk_radius * f.disk_radius;
    return s * s / (std::numbers::pi * ra2) * (theta - 0.5 * std::sin(2.0 * theta)) +
           (phi - 0.5 * std::sin(2.0 * phi)) / std::numbers::pi;
}

double pdf_inner(const GeometryFrame& f, double w)
{
    return 2.0 * w / (f.disk_radius * f.disk_radius);
}

double pdf_outer(const GeometryFrame& f, double w)
{
    const double s = ground_offset(f, w);
    return 2.0 * w / (std::numbers::pi * f.disk_radius * f.disk_radius) * receiver_angle(f, s);
}

}  // namespace

void NetworkConfig::validate() const
{
    if (n_nodes < 1) {
        throw std::invalid_argument("NetworkConfig: n_nodes must be >= 1");
    }
    if (!(disk_radius > 0.0) || !std::isfinite(disk_radius)) {
        throw std::invalid_argument("NetworkConfig: disk_radius must be > 0");
    }
    if (!(altitude >= 0.0) || !std::isfinite(altitude)) {
        throw std::invalid_argument("NetworkConfig: altitude must be >= 0");
    }
}

GeometryFrame make_frame(const NetworkConfig& config, double x0)
{
    config.validate();
    if (!(x0 >= 0.0) || x0 > config.disk_radius) {
        std::ostringstream msg;
        msg << "make_frame: receiver offset x0 = " << x0 << " m outside [0, "
            << config.disk_radius << "] m";
        throw std::invalid_argument(msg.str());
    }
    GeometryFrame f;
    f.x0 = x0;
    f.disk_radius = config.disk_radius;
    f.altitude = config.altitude;
    f.s_m = config.disk_radius - x0;
    f.s_p = config.disk_radius + x0;
    f.d = std::hypot(config.disk_radius, config.altitude);
    f.w_m = std::hypot(f.s_m, config.altitude);
    f.w_p = std::hypot(f.s_p, config.altitude);
    return f;
}

double cdf_link_distance(const GeometryFrame& frame, double w)
{
    if (w <= frame.altitude) {
        return 0.0;
    }
    if (w >= frame.w_p) {
        return 1.0;
    }
    const double value = frame.inner_piece(w) ? cdf_inner(frame, w) : cdf_outer(frame, w);
    return std::clamp(value, 0.0, 1.0);
}

double ccdf_link_distance(const GeometryFrame& frame, double w)
{
    if (w <= frame.altitude) {
        return 1.0;
    }
    if (w >= frame.w_p) {
        return 0.0;
    }
    if (frame.inner_piece(w)) {
        // 1 - (w^2 - h^2)/r_a^2 = (d^2 - w^2)/r_a^2 without the subtraction from 1.
        const double ra2 = frame.disk_radius * frame.disk_radius;
        return std::max(0.0, (frame.d - w) * (frame.d + w) / ra2);
    }
    return std::clamp(1.0 - cdf_outer(frame, w), 0.0, 1.0);
}

double pdf_link_distance(const GeometryFrame& frame, double w)
{
    if (w < frame.altitude || w > frame.w_p) {
        return 0.0;
    }
    return frame.inner_piece(w) ? pdf_inner(frame, w) : pdf_outer(frame, w);
}

double pdf_serving_distance(const GeometryFrame& frame, int n_nodes, double r)
{
    if (n_nodes < 1) {
        throw std::invalid_argument("pdf_serving_distance: n_nodes must be >= 1");
    }
    if (r < frame.altitude || r > frame.w_p) {
        return 0.0;
    }
    const double tail = ccdf_link_distance(frame, r);
    return n_nodes * std::pow(tail, n_nodes - 1) * pdf_link_distance(frame, r);
}

double pdf_interferer_given_serving(const GeometryFrame& frame, double r, double u)
{
    if (u < r || u > frame.w_p || r < frame.altitude) {
        return 0.0;
    }
    const double tail = ccdf_link_distance(frame, r);
    if (tail <= 0.0) {
        return 0.0;
    }
    return pdf_link_distance(frame, u) / tail;
}

double joint_pdf_serving_dominant(const GeometryFrame& frame, int n_nodes, double r, double u1)
{
    if (n_nodes < 2) {
        throw std::invalid_argument("joint_pdf_serving_dominant: n_nodes must be >= 2");
    }
    if (r < frame.altitude || u1 < r || u1 > frame.w_p) {
        return 0.0;
    }
    const double n = n_nodes;
    return n * (n - 1.0) * pdf_link_distance(frame, r) * pdf_link_distance(frame, u1) *
           std::pow(ccdf_link_distance(frame, u1), n_nodes - 2);
}

double pdf_residual_interferer(const GeometryFrame& frame, double r, double u1, double u)
{
    // r only selects the branch of the case table; the density itself depends
    // on u1 alone.
    if (r < frame.altitude || u1 < r || u < u1 || u > frame.w_p) {
        return 0.0;
    }
    const double tail = ccdf_link_distance(frame, u1);
    if (tail <= 0.0) {
        return 0.0;
    }
    return pdf_link_distance(frame, u) / tail;
}

double pdf_dominant_distance(const GeometryFrame& frame, int n_nodes, double u1)
{
    if (n_nodes < 2) {
        throw std::invalid_argument("pdf_dominant_distance: n_nodes must be >= 2");
    }
    if (u1 < frame.altitude || u1 > frame.w_p) {
        return 0.0;
    }
    const double n = n_nodes;
    return n * (n - 1.0) * cdf_link_distance(frame, u1) * pdf_link_distance(frame, u1) *
           std::pow(ccdf_link_distance(frame, u1), n_nodes - 2);
}

DistanceTriple order_distances(std::span<const double> distances)
{
    if (distances.size() < 2) {
        throw std::invalid_argument("order_distances: need at least two distances");
    }
    std::vector<double> sorted(distances.begin(), distances.end());
    std::sort(sorted.begin(), sorted.end());
    DistanceTriple t;
    t.serving = sorted[0];
    t.dominant = sorted[1];
    t.residual.assign(sorted.begin() + 2, sorted.end());
    return t;
}

namespace origin {

namespace {
double rim2(double ra, double h) { return ra * ra + h * h; }
}  // namespace

double cdf_link_distance(double disk_radius, double altitude, double w)
{
    const double d = std::sqrt(rim2(disk_radius, altitude));
    if (w <= altitude) return 0.0;
    if (w >= d) return 1.0;
    return (w * w - altitude * altitude) / (disk_radius * disk_radius);
}

double pdf_link_distance(double disk_radius, double altitude, double w)
{
    const double d = std::sqrt(rim2(disk_radius, altitude));
    if (w < altitude || w > d) return 0.0;
    return 2.0 * w / (disk_radius * disk_radius);
}

double pdf_serving_distance(double disk_radius, double altitude, int n_nodes, double r)
{
    const double d2 = rim2(disk_radius, altitude);
    if (r < altitude || r * r > d2) return 0.0;
    const double ra2 = disk_radius * disk_radius;
    return n_nodes * (2.0 * r / ra2) * std::pow((d2 - r * r) / ra2, n_nodes - 1);
}

double pdf_interferer_given_serving(double disk_radius, double altitude, double r, double u)
{
    const double d2 = rim2(disk_radius, altitude);
    if (u < r || u * u > d2) return 0.0;
    return 2.0 * u / (d2 - r * r);
}

double joint_pdf_serving_dominant(double disk_radius, double altitude, int n_nodes, double r,
                                  double u1)
{
    const double d2 = rim2(disk_radius, altitude);
    if (r < altitude || u1 < r || u1 * u1 > d2) return 0.0;
    const double n = n_nodes;
    const double ra2 = d2 - altitude * altitude;
    return n * (n - 1.0) * std::pow(d2 - u1 * u1, n_nodes - 2) * 4.0 * r * u1 /
           std::pow(ra2, n_nodes);
}

double pdf_residual_interferer(double disk_radius, double altitude, double u1, double u)
{
    const double d2 = rim2(disk_radius, altitude);
    if (u < u1 || u * u > d2) return 0.0;
    return 2.0 * u / (d2 - u1 * u1);
}

}  // namespace origin

}  // namespace uavcov
