#include "uavcov/approx.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "uavcov/specfn.hpp"

namespace uavcov {

namespace {

// Moments are conditional expectations, so tolerances are set relative to
// the tail mass beyond u1 rather than in absolute units. The floor matters
// when the outer piece is only a few ulps wide (receiver next to the
// centre) and the density there is dominated by rounding.
QuadratureSpec moment_spec(double floor)
{
    QuadratureSpec s;
    s.abs_tol = floor;
    s.rel_tol = 1e-10;
    s.max_subdivisions = 400;
    return s;
}

constexpr double kMomentFloor = 1e-13;

// Moments of the per-term residual interference in units of u1^-α, i.e. of
// V(u) = (u1 / u)^α under the residual-distance law on [u1, w_p].
struct ScaledMoments
{
    double mean = 0.0;
    double variance = 0.0;
    double third = 0.0;
    bool degenerate = false;
};

ScaledMoments scaled_moments(const GeometryFrame& frame, double alpha, double u1, bool central,
                             bool third)
{
    ScaledMoments out;
    auto scaled = [&](double u) { return std::pow(u1 / u, alpha); };
    if (u1 >= frame.w_p) {
        out.mean = scaled(frame.w_p);
        out.degenerate = true;
        return out;
    }

    // (u1/w_p)^α bounds the scaled moments from below.
    const double floor_scale =
        kMomentFloor * std::max(ccdf_link_distance(frame, u1), 0.0) * scaled(frame.w_p);
    double tail = 0.0;
    double numerator = 0.0;
    if (u1 <= frame.w_m) {
        const double ra2 = frame.disk_radius * frame.disk_radius;
        tail = (frame.d - u1) * (frame.d + u1) / ra2;
        // ∫_{u1}^{w_m} (u1/u)^α 2u/r_a^2 du
        const double ratio_pow = std::expm1((alpha - 2.0) * std::log(u1 / frame.w_m));
        numerator = 2.0 * u1 * u1 * ratio_pow / ((2.0 - alpha) * ra2);
        if (frame.w_p > frame.w_m) {
            numerator += integrate([&](double u) { return scaled(u) * pdf_link_distance(frame, u); },
                                   frame.w_m, frame.w_p, moment_spec(floor_scale))
                             .value;
        }
    } else {
        const auto res = integrate_vector(
            [&](double u, std::span<double> v) {
                const double density = pdf_link_distance(frame, u);
                v[0] = scaled(u) * density;
                v[1] = density;
            },
            2, u1, frame.w_p, moment_spec(floor_scale));
        numerator = res.value[0];
        tail = res.value[1];
    }
    if (!(tail > 0.0)) {
        out.mean = scaled(frame.w_p);
        out.degenerate = true;
        return out;
    }
    out.mean = numerator / tail;
    if (!central) return out;

    const double mean = out.mean;
    const double kink = u1 * std::pow(mean, -1.0 / alpha);
    const std::size_t dim = third ? 2 : 1;
    const auto res = integrate_vector(
        [&](double u, std::span<double> v) {
            const double density = pdf_link_distance(frame, u);
            const double dev = std::abs(scaled(u) - mean);
            v[0] = dev * dev * density;
            if (v.size() > 1) v[1] = dev * dev * dev * density;
        },
        dim, u1, frame.w_p,
        moment_spec(floor_scale * mean * mean * mean).with_breakpoints({frame.w_m, kink}));
    out.variance = res.value[0] / tail;
    if (third) out.third = res.value[1] / tail;
    return out;
}

void check_residual_args(const GeometryFrame& frame, int n_nodes, double alpha, double r,
                         double u1, const char* op)
{
    if (n_nodes < 3) {
        std::ostringstream msg;
        msg << op << ": needs n_nodes >= 3 for residual interferers (got " << n_nodes << ")";
        throw std::invalid_argument(msg.str());
    }
    if (!(alpha > 2.0)) {
        throw std::invalid_argument(std::string(op) + ": alpha must be > 2");
    }
    if (!(r >= frame.altitude && r <= u1 && u1 <= frame.w_p)) {
        std::ostringstream msg;
        msg << op << ": requires h <= r <= u1 <= w_p (got r = " << r << ", u1 = " << u1 << ")";
        throw std::invalid_argument(msg.str());
    }
}

ResidualMoments to_physical(const ScaledMoments& m, int n_nodes, double alpha, double u1)
{
    const double unit = std::pow(u1, -alpha);
    ResidualMoments out;
    out.mean_per_term = m.mean * unit;
    out.mean_total = (n_nodes - 2) * out.mean_per_term;
    out.variance_per_term = m.variance * unit * unit;
    out.variance_total = (n_nodes - 2) * out.variance_per_term;
    out.third_abs_moment_per_term = m.third * unit * unit * unit;
    return out;
}

struct CltIntegral
{
    double coverage = 0.0;
    double correction = 0.0;  // ∫ ρ/σ^3 f_{U1} du1, before the C/sqrt(N-2) factor
    double error = 0.0;
    double correction_error = 0.0;
};

// Integrates over the dominant distance u1 on the outside and the serving
// distance r in [h, u1] inside; the residual moments depend on u1 only, so
// they are computed once per outer node.
CltIntegral clt_integral(const GeometryFrame& frame, int n_nodes, double alpha, double beta,
                         bool with_correction, const QuadratureSpec& spec)
{
    const double h = frame.altitude;
    const double n = n_nodes;
    const QuadratureSpec outer = spec.with_breakpoints({frame.w_m});
    QuadratureSpec inner_base = spec;

    auto outer_integrand = [&](double u1, std::span<double> out) {
        out[0] = 0.0;
        if (out.size() > 1) out[1] = 0.0;
        const double tail = ccdf_link_distance(frame, u1);
        const double weight =
            n * (n - 1.0) * pdf_link_distance(frame, u1) * std::pow(tail, n_nodes - 2);
        if (weight == 0.0) return;

        if (n_nodes == 2) {
            // SIR > β  <=>  r < u1 β^(-1/α)
            const double r_max = std::min(u1, u1 * std::pow(beta, -1.0 / alpha));
            out[0] = weight * cdf_link_distance(frame, r_max);
            return;
        }

        const ScaledMoments m = scaled_moments(frame, alpha, u1, true, with_correction);
        const double residual_mean = (n - 2.0) * m.mean;
        const double residual_sd = std::sqrt((n - 2.0) * m.variance);
        // Coverage switches where β^-1 (u1/r)^α = 1 + (N-2) μ.
        const double r_switch = u1 * std::pow(beta * (1.0 + residual_mean), -1.0 / alpha);
        double inner = 0.0;
        if (m.degenerate || !(residual_sd > 0.0)) {
            inner = cdf_link_distance(frame, std::min(u1, r_switch));
        } else {
            auto integrand = [&](double r) {
                const double g =
                    (std::pow(u1 / r, alpha) / beta - 1.0 - residual_mean) / residual_sd;
                return normal_cdf(g) * pdf_link_distance(frame, r);
            };
            inner = integrate(integrand, h, u1,
                              inner_base.with_breakpoints({frame.w_m, r_switch}))
                        .value;
        }
        out[0] = weight * inner;
        if (with_correction && !m.degenerate && m.variance > 0.0) {
            out[1] = weight * cdf_link_distance(frame, u1) * m.third / std::pow(m.variance, 1.5);
        }
    };

    const std::size_t dim = with_correction ? 2 : 1;
    const auto res = integrate_vector(outer_integrand, dim, h, frame.w_p, outer);
    CltIntegral out;
    out.coverage = res.value[0];
    out.error = res.error[0];
    if (with_correction) {
        out.correction = res.value[1];
        out.correction_error = res.error[1];
    }
    return out;
}

void check_clt_args(const NetworkConfig& config, double alpha, double beta, const char* op)
{
    config.validate();
    if (!(alpha > 2.0)) throw std::invalid_argument(std::string(op) + ": alpha must be > 2");
    if (!(beta > 0.0)) throw std::invalid_argument(std::string(op) + ": beta must be > 0");
}

std::string describe(const NetworkConfig& config, double alpha, double x0, double beta)
{
    std::ostringstream msg;
    msg << "(N=" << config.n_nodes << ", r_a=" << config.disk_radius
        << " m, h=" << config.altitude << " m, x0=" << x0 << " m, alpha=" << alpha
        << ", beta=" << beta << ")";
    return msg.str();
}

}  // namespace

ResidualMoments residual_mean(const GeometryFrame& frame, int n_nodes, double alpha, double r,
                              double u1)
{
    check_residual_args(frame, n_nodes, alpha, r, u1, "residual_mean");
    return to_physical(scaled_moments(frame, alpha, u1, false, false), n_nodes, alpha, u1);
}

double residual_variance(const GeometryFrame& frame, int n_nodes, double alpha, double r,
                         double u1)
{
    check_residual_args(frame, n_nodes, alpha, r, u1, "residual_variance");
    return to_physical(scaled_moments(frame, alpha, u1, true, false), n_nodes, alpha, u1)
        .variance_total;
}

double residual_third_abs_moment(const GeometryFrame& frame, int n_nodes, double alpha, double r,
                                 double u1)
{
    check_residual_args(frame, n_nodes, alpha, r, u1, "residual_third_abs_moment");
    return to_physical(scaled_moments(frame, alpha, u1, true, true), n_nodes, alpha, u1)
        .third_abs_moment_per_term;
}

ResidualMoments residual_moments(const GeometryFrame& frame, int n_nodes, double alpha, double r,
                                 double u1)
{
    check_residual_args(frame, n_nodes, alpha, r, u1, "residual_moments");
    return to_physical(scaled_moments(frame, alpha, u1, true, true), n_nodes, alpha, u1);
}

CoverageEstimate coverage_clt(const NetworkConfig& config, double alpha, double x0, double beta,
                              const QuadratureSpec& spec)
{
    check_clt_args(config, alpha, beta, "coverage_clt");
    const GeometryFrame frame = make_frame(config, x0);
    CoverageEstimate est;
    if (config.n_nodes == 1) {
        est.value = 1.0;
        return est;
    }
    try {
        const auto res = clt_integral(frame, config.n_nodes, alpha, beta, false, spec);
        est.value = std::clamp(res.coverage, 0.0, 1.0);
        est.quad_error = res.error;
    } catch (const NumericalError& e) {
        throw NumericalError("coverage_clt" + describe(config, alpha, x0, beta) + ": " +
                             e.what());
    }
    return est;
}

CoverageBounds coverage_bounds(const NetworkConfig& config, double alpha, double x0, double beta,
                               double berry_esseen_constant, const QuadratureSpec& spec)
{
    check_clt_args(config, alpha, beta, "coverage_bounds");
    if (config.n_nodes < 3) {
        throw std::invalid_argument("coverage_bounds: needs n_nodes >= 3");
    }
    const GeometryFrame frame = make_frame(config, x0);
    CltIntegral res;
    try {
        res = clt_integral(frame, config.n_nodes, alpha, beta, true, spec);
    } catch (const NumericalError& e) {
        throw NumericalError("coverage_bounds" + describe(config, alpha, x0, beta) + ": " +
                             e.what());
    }
    const double spread =
        berry_esseen_constant * res.correction / std::sqrt(config.n_nodes - 2.0);
    CoverageBounds out;
    out.clt = std::clamp(res.coverage, 0.0, 1.0);
    out.lower_unclamped = res.coverage - spread;
    out.upper_unclamped = res.coverage + spread;
    out.lower = std::clamp(out.lower_unclamped, 0.0, 1.0);
    out.upper = std::clamp(out.upper_unclamped, 0.0, 1.0);
    out.quad_error = res.error + berry_esseen_constant * res.correction_error /
                                     std::sqrt(config.n_nodes - 2.0);
    return out;
}

namespace origin {

double residual_mean_total(double disk_radius, double altitude, int n_nodes, double alpha,
                           double u1)
{
    const double d2 = disk_radius * disk_radius + altitude * altitude;
    const double d = std::sqrt(d2);
    return 2.0 * (n_nodes - 2) * (std::pow(u1, 2.0 - alpha) - std::pow(d, 2.0 - alpha)) /
           ((alpha - 2.0) * (d2 - u1 * u1));
}

double residual_variance_total(double disk_radius, double altitude, int n_nodes, double alpha,
                               double u1)
{
    const double d2 = disk_radius * disk_radius + altitude * altitude;
    const double d = std::sqrt(d2);
    const double gap = d2 - u1 * u1;
    const double first = std::pow(d, 2.0 - alpha) - std::pow(u1, 2.0 - alpha);
    const double second = std::pow(d, 2.0 - 2.0 * alpha) - std::pow(u1, 2.0 - 2.0 * alpha);
    return (n_nodes - 2) * (-4.0 * first * first / (gap * gap * (alpha - 2.0) * (alpha - 2.0)) -
                            second / (gap * (alpha - 1.0)));
}

}  // namespace origin

}  // namespace uavcov
